#include "partrace/bigint.hpp"

namespace partrace {

Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;  // truncates toward zero
  Int r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

Int ceil_div(const Int& a, const Int& b) {
  Int q = a / b;
  Int r = a % b;
  if (r != 0 && ((r < 0) == (b < 0))) ++q;
  return q;
}

Int gcd(const Int& a, const Int& b) {
  Int x = abs(a);
  Int y = abs(b);
  while (y != 0) {
    Int t = x % y;
    x = y;
    y = t;
  }
  return x;
}

Int floor(const Rational& r) {
  return floor_div(numerator(r), denominator(r));
}

Int ceil(const Rational& r) {
  return ceil_div(numerator(r), denominator(r));
}

}  // namespace partrace
