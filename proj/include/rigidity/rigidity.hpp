#pragma once

// Everything except the property-suite runner (rigidity/verify.hpp).

#include "rigidity/error.hpp"
#include "rigidity/frames.hpp"
#include "rigidity/json_io.hpp"
#include "rigidity/linalg.hpp"
#include "rigidity/partitions.hpp"
#include "rigidity/rng.hpp"
#include "rigidity/semilinear.hpp"
#include "rigidity/subspace.hpp"
