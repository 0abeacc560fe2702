#pragma once

#include "sumprod/error.hpp"
#include "sumprod/rational.hpp"
#include "sumprod/rset.hpp"
#include "sumprod/set_ops.hpp"
#include "sumprod/numeric.hpp"
#include "sumprod/report.hpp"
#include "sumprod/json_io.hpp"
#include "sumprod/energy.hpp"
#include "sumprod/incidence.hpp"
#include "sumprod/regularise.hpp"
#include "sumprod/bunching.hpp"
#include "sumprod/aaaa.hpp"
#include "sumprod/exponents.hpp"
#include "sumprod/generators.hpp"
#include "sumprod/harness.hpp"
