#pragma once

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace oracle {

// (e^x - e^-x) / (e^x + e^-x) in 50-digit decimal arithmetic.
inline double psi_exact(double d, double beta) {
  using big = boost::multiprecision::cpp_dec_float_50;
  const big x = big(beta) * big(d);
  const big ep = boost::multiprecision::exp(x);
  const big em = boost::multiprecision::exp(-x);
  return static_cast<double>((ep - em) / (ep + em));
}

}  // namespace oracle
