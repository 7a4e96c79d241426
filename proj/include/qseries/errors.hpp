// SPDX-License-Identifier: Apache-2.0
//
// Exception hierarchy shared by every qseries module.

#ifndef QSERIES_ERRORS_HPP_
#define QSERIES_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace qseries {

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QSERIES_DEFINE_ERROR(Name)          \
  class Name : public error {               \
   public:                                  \
    using error::error;                     \
  }

/// Inversion of a series that vanishes to its known order.
QSERIES_DEFINE_ERROR(zero_divisor);
/// Infinite product whose factors do not tend to 1.
QSERIES_DEFINE_ERROR(divergent_product);
/// Infinite product containing the factor (1 - 1).
QSERIES_DEFINE_ERROR(zero_factor);
/// Appell-Lerch denominator 1 - q^0.
QSERIES_DEFINE_ERROR(pole_error);
/// Theta-quotient denominator normalizes to an identically zero symbol.
QSERIES_DEFINE_ERROR(zero_denominator);
QSERIES_DEFINE_ERROR(non_truncatable);
QSERIES_DEFINE_ERROR(divisibility_error);
QSERIES_DEFINE_ERROR(range_error);
QSERIES_DEFINE_ERROR(precision_error);
QSERIES_DEFINE_ERROR(tail_estimate_unreliable);
QSERIES_DEFINE_ERROR(mismatch_error);
QSERIES_DEFINE_ERROR(parse_error);

#undef QSERIES_DEFINE_ERROR

}  // namespace qseries

#endif  // QSERIES_ERRORS_HPP_
