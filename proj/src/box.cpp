#include "bogo/box.hpp"

#include <cmath>

namespace bogo {

void Box::validate(double cutoff) const {
  if (dim < 1 || dim > 3) fail(Errc::invalid_argument, "box dim must be 1, 2 or 3");
  if (!(side > 0)) fail(Errc::invalid_argument, "box side must be positive");
  if (!(side > 2 * cutoff))
    fail(Errc::invalid_argument, "box side must exceed twice the potential cutoff");
}

Point min_image_delta(const Point& a, const Point& b, const Box& box) {
  Point d{0, 0, 0};
  for (int c = 0; c < box.dim; ++c) {
    double v = a[c] - b[c];
    v -= box.side * std::round(v / box.side);
    d[c] = v;
  }
  return d;
}

double min_image_dist(const Point& a, const Point& b, const Box& box) {
  Point d = min_image_delta(a, b, box);
  double r2 = 0;
  for (int c = 0; c < box.dim; ++c) r2 += d[c] * d[c];
  return std::sqrt(r2);
}

void wrap_into_box(Point& p, const Box& box) {
  for (int c = 0; c < box.dim; ++c) {
    p[c] = std::fmod(p[c], box.side);
    if (p[c] < 0) p[c] += box.side;
  }
}

ExtReal point_interaction(const Point& x, const ParticleState& gamma, const RadialPotential& pot,
                          const Box& box, int skip) {
  ExtReal w;
  for (int i = 0; i < gamma.count(); ++i) {
    if (i == skip) continue;
    double r = min_image_dist(x, gamma.pts[i], box);
    w += pot.value(r);
    if (w.inf) return w;
  }
  return w;
}

}  // namespace bogo
