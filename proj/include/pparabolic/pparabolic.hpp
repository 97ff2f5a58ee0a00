#pragma once

#include "pparabolic/error.hpp"
#include "pparabolic/spacetime.hpp"
#include "pparabolic/sampling.hpp"
#include "pparabolic/fields.hpp"
#include "pparabolic/expression.hpp"
#include "pparabolic/geometry.hpp"
#include "pparabolic/operator.hpp"
#include "pparabolic/selling.hpp"
#include "pparabolic/solver.hpp"
#include "pparabolic/barriers.hpp"
#include "pparabolic/regularity.hpp"
#include "pparabolic/io.hpp"
