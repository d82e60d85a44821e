#include "smalldev/curves.hpp"

#include <charconv>
#include <cmath>

namespace smalldev {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const BoundCurve& curve) {
  os << curve.abscissa << ",lower,upper,method,params\n";
  for (const auto& p : curve.points) {
    os << format_double(p.x) << ',' << format_double(p.lower) << ',' << format_double(p.upper) << ','
       << p.method << ',' << curve.params << '\n';
  }
}

}  // namespace smalldev
