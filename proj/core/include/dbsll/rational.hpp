#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace dbsll {

// Exact arithmetic everywhere; no floating point in the core.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

} // namespace dbsll
