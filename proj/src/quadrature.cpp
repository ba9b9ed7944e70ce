#include "dbar/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include "dbar/errors.hpp"

namespace dbar {

namespace {

template <unsigned N>
GaussRule make_rule() {
  using gauss = boost::math::quadrature::gauss<double, N>;
  GaussRule rule;
  const auto& x = gauss::abscissa();
  const auto& w = gauss::weights();
  for (std::size_t i = 0; i < x.size(); ++i) {
    rule.nodes.push_back(x[i]);
    rule.weights.push_back(w[i]);
    if (x[i] != 0.0) {
      rule.nodes.push_back(-x[i]);
      rule.weights.push_back(w[i]);
    }
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int points) {
  static const GaussRule r4 = make_rule<4>(), r8 = make_rule<8>(), r10 = make_rule<10>(), r16 = make_rule<16>(),
                         r20 = make_rule<20>(), r32 = make_rule<32>(), r64 = make_rule<64>();
  switch (points) {
    case 4: return r4;
    case 8: return r8;
    case 10: return r10;
    case 16: return r16;
    case 20: return r20;
    case 32: return r32;
    case 64: return r64;
    default: throw InvalidArgument("unsupported Gauss-Legendre order " + std::to_string(points));
  }
}

std::vector<double> bisect_panels(std::span<const double> breaks) {
  std::vector<double> out;
  out.reserve(2 * breaks.size());
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    out.push_back(breaks[p]);
    out.push_back(0.5 * (breaks[p] + breaks[p + 1]));
  }
  out.push_back(breaks.back());
  return out;
}

std::vector<double> graded_breaks(double upper, int panels, double knee) {
  const double width = upper / panels;
  std::vector<double> breaks{0.0};
  if (knee > 0.0 && knee < 0.25 * width) {
    double b = knee;
    while (b < width) {
      breaks.push_back(b);
      b *= 2.0;
    }
  }
  for (int p = 1; p <= panels; ++p) {
    const double b = width * p;
    if (b > breaks.back() * (1.0 + 1e-12)) breaks.push_back(b);
  }
  breaks.back() = upper;
  return breaks;
}

}  // namespace dbar
