#pragma once
// Minimal patches from Weierstrass data,
//   X(z) = 1/2 Re int_{z0}^z (f (1 - g^2), i f (1 + g^2), 2 f g) dw,
// integrated numerically along the straight segment from the basepoint.

#include <functional>
#include <string>
#include <vector>

#include "plateau/geom/patch.hpp"
#include "plateau/numerics.hpp"

namespace plateau::bjorling {

/// p(z) / q(z) with complex coefficients in increasing degree.
struct Rational {
  std::vector<cdouble> num{1.0};
  std::vector<cdouble> den{1.0};

  cdouble operator()(cdouble z) const {
    return horner<cdouble>(num, z) / horner<cdouble>(den, z);
  }
  cdouble derivative(cdouble z) const {
    auto dpoly = [](const std::vector<cdouble>& c, cdouble x) {
      cdouble acc = 0.0;
      for (std::size_t k = c.size(); k-- > 1;) acc = acc * x + double(k) * c[k];
      return acc;
    };
    const cdouble p = horner<cdouble>(num, z), q = horner<cdouble>(den, z);
    return (dpoly(num, z) * q - p * dpoly(den, z)) / (q * q);
  }
  std::vector<cdouble> poles() const { return polynomial_roots(den); }
};

struct WeierstrassData {
  std::function<cdouble(cdouble)> f, df, g, dg;
  std::string name;
};

enum class WeierstrassPreset { catenoid, helicoid, enneper };

/// catenoid: f = e^{-z}, g = e^z; helicoid: f = -i e^{-z}, g = e^z;
/// Enneper: f = 1, g = z.
inline WeierstrassData weierstrass_preset(WeierstrassPreset p) {
  const cdouble I(0.0, 1.0);
  switch (p) {
    case WeierstrassPreset::catenoid:
      return {[](cdouble z) { return std::exp(-z); }, [](cdouble z) { return -std::exp(-z); },
              [](cdouble z) { return std::exp(z); }, [](cdouble z) { return std::exp(z); }, "catenoid"};
    case WeierstrassPreset::helicoid:
      return {[I](cdouble z) { return -I * std::exp(-z); }, [I](cdouble z) { return I * std::exp(-z); },
              [](cdouble z) { return std::exp(z); }, [](cdouble z) { return std::exp(z); }, "helicoid"};
    case WeierstrassPreset::enneper:
      return {[](cdouble) { return cdouble(1.0); }, [](cdouble) { return cdouble(0.0); },
              [](cdouble z) { return z; }, [](cdouble) { return cdouble(1.0); }, "enneper"};
  }
  throw Error(ErrorKind::precondition, "unknown Weierstrass preset");
}

inline geom::Domain weierstrass_default_domain(WeierstrassPreset p) {
  if (p == WeierstrassPreset::enneper) return {-1.0, 1.0, -1.0, 1.0};
  return {-1.0, 1.0, 0.0, 2 * pi};
}

namespace detail {
inline bool inside(const geom::Domain& d, cdouble z, double margin) {
  return z.real() >= d.u0 - margin && z.real() <= d.u1 + margin && z.imag() >= d.v0 - margin &&
         z.imag() <= d.v1 + margin;
}
}  // namespace detail

/// Rational data; poles of f or g in the (slightly enlarged) domain raise a
/// domain error.
inline WeierstrassData weierstrass_rational(const Rational& f, const Rational& g, const geom::Domain& d,
                                            double margin = 1e-9) {
  for (const auto* r : {&f, &g})
    for (cdouble z : r->poles())
      if (detail::inside(d, z, margin))
        throw Error(ErrorKind::domain, std::string(r == &f ? "f" : "g") + " has a pole at " +
                                           fmt17(z.real()) + (z.imag() < 0 ? "" : "+") + fmt17(z.imag()) +
                                           "i inside the domain");
  return {f, [f](cdouble z) { return f.derivative(z); }, g, [g](cdouble z) { return g.derivative(z); },
          "rational"};
}

class WeierstrassPatch final : public geom::ParamPatch {
 public:
  WeierstrassPatch(WeierstrassData data, geom::Domain domain, cdouble basepoint, int gauss_points = 16,
                   double max_piece = 0.25)
      : w_(std::move(data)), d_(domain), z0_(basepoint), rule_(gauss_legendre(gauss_points)),
        max_piece_(max_piece) {
    require(domain.du() > 0 && domain.dv() > 0, "weierstrass_patch: empty domain");
    require(detail::inside(domain, basepoint, 1e-12), "weierstrass_patch: basepoint outside the domain");
  }

  const WeierstrassData& data() const { return w_; }
  geom::Domain domain() const override { return d_; }

  CVec3 phi(cdouble z) const {
    const cdouble f = w_.f(z), g = w_.g(z);
    const cdouble I(0.0, 1.0);
    return {f * (1.0 - g * g), I * f * (1.0 + g * g), 2.0 * f * g};
  }
  CVec3 dphi(cdouble z) const {
    const cdouble f = w_.f(z), g = w_.g(z), df = w_.df(z), dg = w_.dg(z);
    const cdouble I(0.0, 1.0);
    return {df * (1.0 - g * g) - 2.0 * f * g * dg, I * (df * (1.0 + g * g) + 2.0 * f * g * dg),
            2.0 * (df * g + f * dg)};
  }

  /// Composite Gauss-Legendre along the segment z0 -> z.
  CVec3 integral(cdouble z) const {
    const cdouble delta = z - z0_;
    const int pieces = std::max(1, int(std::ceil(std::abs(delta) / max_piece_)));
    const cdouble h = delta / double(pieces);
    CVec3 acc = CVec3::Zero();
    for (int p = 0; p < pieces; ++p) {
      const cdouble a = z0_ + double(p) * h;
      for (std::size_t i = 0; i < rule_.x.size(); ++i)
        acc += rule_.w[i] * phi(a + h * (0.5 * (rule_.x[i] + 1.0)));
    }
    return acc * (h * 0.5);
  }

  Vec3 position(double u, double v) const override { return 0.5 * integral({u, v}).real(); }

  geom::PatchJet jet(double u, double v) const override {
    const cdouble z(u, v);
    const CVec3 P = phi(z), dP = dphi(z);
    geom::PatchJet j;
    j.X = position(u, v);
    j.Xu = 0.5 * P.real();
    j.Xv = -0.5 * P.imag();
    j.Xuu = 0.5 * dP.real();
    j.Xuv = -0.5 * dP.imag();
    j.Xvv = -0.5 * dP.real();
    return j;
  }

  bool conformal() const override { return true; }
  double conformal_factor(double u, double v) const override {
    const cdouble z(u, v);
    const double lam = 0.5 * std::abs(w_.f(z)) * (1.0 + std::norm(w_.g(z)));
    return lam * lam;
  }

  /// Gaussian curvature from the data alone:
  ///   K = -16 |g'|^2 / (|f|^2 (1 + |g|^2)^4)
  /// for the normalization with the leading 1/2.
  double closed_form_K(double u, double v) const {
    const cdouble z(u, v);
    const double q = 1.0 + std::norm(w_.g(z));
    return -16.0 * std::norm(w_.dg(z)) / (std::norm(w_.f(z)) * q * q * q * q);
  }

 private:
  WeierstrassData w_;
  geom::Domain d_;
  cdouble z0_;
  GaussRule rule_;
  double max_piece_;
};

inline WeierstrassPatch weierstrass_patch(WeierstrassPreset p, std::optional<geom::Domain> domain = {},
                                          std::optional<cdouble> basepoint = {}) {
  const auto d = domain.value_or(weierstrass_default_domain(p));
  const cdouble z0 = basepoint.value_or(cdouble(0.5 * (d.u0 + d.u1), d.v0));
  return WeierstrassPatch(weierstrass_preset(p), d, z0);
}

}  // namespace plateau::bjorling
