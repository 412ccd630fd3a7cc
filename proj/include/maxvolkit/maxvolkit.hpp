#pragma once

#include "maxvolkit/errors.hpp"
#include "maxvolkit/kernels.hpp"
#include "maxvolkit/matrix.hpp"
#include "maxvolkit/matrix_market.hpp"
#include "maxvolkit/maxvol.hpp"
#include "maxvolkit/precond.hpp"
#include "maxvolkit/recsys.hpp"
#include "maxvolkit/rect_maxvol.hpp"
#include "maxvolkit/rng.hpp"
#include "maxvolkit/skeleton.hpp"
#include "maxvolkit/version.hpp"
