#include "matterwave/lattice.hpp"

#include <cmath>
#include <string>

namespace matterwave {

Lattice::Lattice(int dim, std::vector<int> shape, double spacing, bool periodic)
    : dim_(dim), shape_(std::move(shape)), spacing_(spacing), periodic_(periodic)
{
    if (dim_ < 1 || dim_ > 3) throw ParameterError("lattice dim must be 1, 2 or 3");
    if (static_cast<int>(shape_.size()) != dim_)
        throw ParameterError("lattice shape has " + std::to_string(shape_.size()) + " entries but dim = " +
                             std::to_string(dim_));
    if (!(spacing_ > 0.0)) throw ParameterError("lattice spacing must be > 0");
    std::size_t total = 1;
    for (int n : shape_) {
        if (n < 1) throw ParameterError("lattice shape entries must be >= 1");
        total *= static_cast<std::size_t>(n);
    }
    positions_.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
        const auto c = coords(i);
        positions_.push_back({c[0] * spacing_, c[1] * spacing_, c[2] * spacing_});
    }
}

std::array<int, 3> Lattice::coords(std::size_t i) const
{
    std::array<int, 3> c{0, 0, 0};
    for (int axis = dim_ - 1; axis >= 0; --axis) {
        const auto n = static_cast<std::size_t>(shape_[axis]);
        c[axis] = static_cast<int>(i % n);
        i /= n;
    }
    return c;
}

Vec3 Lattice::separation(std::size_t i, std::size_t j) const
{
    const auto a = coords(i);
    const auto b = coords(j);
    Vec3 d{0.0, 0.0, 0.0};
    for (int axis = 0; axis < dim_; ++axis) {
        int delta = a[axis] - b[axis];
        if (periodic_) {
            const int n = shape_[axis];
            delta = ((delta % n) + n) % n;
            if (delta > n / 2) delta -= n;
        }
        d[axis] = delta;
    }
    return d;
}

std::pair<int, int> Lattice::axis_offset_range(int axis) const
{
    if (axis >= dim_) return {0, 0};
    const int n = shape_[axis];
    if (periodic_) return {-((n - 1) / 2), n / 2};
    const int centre = (n - 1) / 2;
    return {-centre, n - 1 - centre};
}

Lattice build_lattice(int dim, const std::vector<int>& shape, double spacing, bool periodic)
{
    return Lattice(dim, shape, spacing, periodic);
}

Lattice lattice_from(const ModelParams& p, bool periodic)
{
    return Lattice(p.dim, p.shape, p.spacing, periodic);
}

double norm(const Vec3& v)
{
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

double dot(const Vec3& a, const Vec3& b)
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace matterwave
