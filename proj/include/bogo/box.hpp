#ifndef BOGO_BOX_HPP
#define BOGO_BOX_HPP

#include <array>
#include <vector>

#include "bogo/common.hpp"
#include "bogo/potential.hpp"

namespace bogo {

// Periodic box [0, side)^dim.
struct Box {
  int dim = 1;
  double side = 1;

  double volume() const {
    double v = 1;
    for (int d = 0; d < dim; ++d) v *= side;
    return v;
  }
  void validate(double cutoff) const;
};

using Point = std::array<double, 3>;

// Finite point configuration inside a periodic box.
struct ParticleState {
  std::vector<Point> pts;

  int count() const { return static_cast<int>(pts.size()); }
};

// Minimum-image distance.
double min_image_dist(const Point& a, const Point& b, const Box& box);
// Minimum-image displacement a - b, wrapped per coordinate.
Point min_image_delta(const Point& a, const Point& b, const Box& box);
void wrap_into_box(Point& p, const Box& box);

// Interaction energy of a point x with every particle of gamma (optionally
// skipping index `skip`), with minimum image and the potential's cutoff.
ExtReal point_interaction(const Point& x, const ParticleState& gamma, const RadialPotential& pot,
                          const Box& box, int skip = -1);

}  // namespace bogo

#endif
