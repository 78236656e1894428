#pragma once

#include "gts/legendre.hpp"
#include "gts/poly_traj.hpp"
#include "gts/dg_operators.hpp"
#include "gts/growth.hpp"
#include "gts/problems.hpp"
#include "gts/stepping.hpp"
#include "gts/blowup.hpp"
#include "gts/sweep.hpp"
#include "gts/serialize.hpp"
