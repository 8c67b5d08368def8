#pragma once

#include "pqk/summation.hpp"
#include "pqk/pq_core.hpp"
#include "pqk/test_function.hpp"
#include "pqk/operator.hpp"
#include "pqk/moments.hpp"
#include "pqk/bounds.hpp"
#include "pqk/registry.hpp"
#include "pqk/harness.hpp"
#include "pqk/report.hpp"
#include "pqk/verify.hpp"
