#include "designzeta/numeric.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

namespace dz {

namespace {
thread_local unsigned current_bits = [] {
  HighPrecision::default_precision(mp::detail::digits2_2_10(default_precision_bits));
  return default_precision_bits;
}();
}  // namespace

void set_working_precision(unsigned bits) {
  current_bits = bits;
  HighPrecision::default_precision(mp::detail::digits2_2_10(bits));
}

unsigned working_precision() { return current_bits; }

PrecisionScope::PrecisionScope(unsigned bits) : saved_(working_precision()) { set_working_precision(bits); }

PrecisionScope::~PrecisionScope() { set_working_precision(saved_); }

std::string format_sci(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", std::max(digits - 1, 0), x);
  return buf;
}

std::string format_sci(const HighPrecision& x, int digits) {
  return x.str(static_cast<std::streamsize>(digits), std::ios_base::scientific);
}

}  // namespace dz
