#pragma once

#include "plateau/error.hpp"
#include "plateau/numerics.hpp"
#include "plateau/params.hpp"

#include "plateau/geom/curve.hpp"
#include "plateau/geom/io.hpp"
#include "plateau/geom/mesh.hpp"
#include "plateau/geom/patch.hpp"

#include "plateau/boundary_system.hpp"
#include "plateau/elastica.hpp"

#include "plateau/bjorling/fig1.hpp"
#include "plateau/bjorling/helicoid.hpp"
#include "plateau/bjorling/strip.hpp"
#include "plateau/bjorling/surface.hpp"
#include "plateau/bjorling/weierstrass.hpp"

#include "plateau/audit/energy.hpp"
#include "plateau/audit/gauss_bonnet.hpp"
#include "plateau/audit/report.hpp"
#include "plateau/audit/variation.hpp"
