#pragma once

#include "summakit/version.hpp"
#include "summakit/error.hpp"
#include "summakit/scalar.hpp"
#include "summakit/reading.hpp"
#include "summakit/core_matrix.hpp"
#include "summakit/summability.hpp"
#include "summakit/conditions.hpp"
#include "summakit/proof_harness.hpp"
#include "summakit/families.hpp"
