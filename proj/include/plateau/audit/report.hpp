#pragma once
// Named check records with a stable (sorted) order, serialized as JSON or a
// plain table.

#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "plateau/numerics.hpp"

namespace plateau::audit {

struct AuditRecord {
  double value = 0.0;
  double reference = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  double tolerance = 0.0;
  bool relative = false;  // pass tested on rel_residual
  bool pass = false;
  std::string note;
};

inline AuditRecord make_record(double value, double reference, double tol, bool relative = false,
                               std::string note = {}) {
  AuditRecord r;
  r.value = value;
  r.reference = reference;
  r.abs_residual = std::abs(value - reference);
  r.rel_residual = r.abs_residual / std::max(std::abs(reference), 1e-300);
  r.tolerance = tol;
  r.relative = relative;
  const double res = relative ? r.rel_residual : r.abs_residual;
  r.pass = std::isfinite(res) && res <= tol;
  r.note = std::move(note);
  return r;
}

class AuditReport {
 public:
  AuditRecord& add(const std::string& name, double value, double reference, double tol,
                   bool relative = false, std::string note = {}) {
    return records_[name] = make_record(value, reference, tol, relative, std::move(note));
  }
  /// value must not exceed tol (reference 0).
  AuditRecord& bound(const std::string& name, double value, double tol, std::string note = {}) {
    return add(name, value, 0.0, tol, false, std::move(note));
  }
  /// A yes/no check recorded as 1/0 against reference 1.
  AuditRecord& flag(const std::string& name, bool ok, std::string note = {}) {
    return add(name, ok ? 1.0 : 0.0, 1.0, 0.0, false, std::move(note));
  }

  void merge(const AuditReport& other, const std::string& prefix = {}) {
    for (const auto& [k, v] : other.records_) records_[prefix + k] = v;
  }

  bool all_pass() const {
    for (const auto& [k, v] : records_)
      if (!v.pass) return false;
    return !records_.empty();
  }
  bool contains(const std::string& name) const { return records_.count(name) > 0; }
  const AuditRecord& at(const std::string& name) const {
    auto it = records_.find(name);
    if (it == records_.end()) throw Error(ErrorKind::precondition, "no audit record named " + name);
    return it->second;
  }
  const std::map<std::string, AuditRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, r] : records_) {
      nlohmann::json o;
      o["value"] = r.value;
      o["reference"] = r.reference;
      o["abs_residual"] = r.abs_residual;
      o["rel_residual"] = r.rel_residual;
      o["tolerance"] = r.tolerance;
      o["relative"] = r.relative;
      o["pass"] = r.pass;
      if (!r.note.empty()) o["note"] = r.note;
      j[k] = o;
    }
    return j;
  }

  std::string table() const {
    std::size_t w = 5;
    for (const auto& [k, r] : records_) w = std::max(w, k.size());
    std::ostringstream os;
    auto pad = [&](const std::string& s, std::size_t n) { return s + std::string(n > s.size() ? n - s.size() : 0, ' '); };
    os << pad("check", w) << "  " << pad("value", 24) << pad("reference", 24) << pad("residual", 24)
       << pad("tolerance", 24) << "result\n";
    for (const auto& [k, r] : records_) {
      os << pad(k, w) << "  " << pad(fmt17(r.value), 24) << pad(fmt17(r.reference), 24)
         << pad(fmt17(r.relative ? r.rel_residual : r.abs_residual), 24) << pad(fmt17(r.tolerance), 24)
         << (r.pass ? "pass" : "FAIL") << '\n';
    }
    return os.str();
  }

 private:
  std::map<std::string, AuditRecord> records_;
};

}  // namespace plateau::audit
