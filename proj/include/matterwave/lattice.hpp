#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "matterwave/params.hpp"

namespace matterwave {

/// Sites of a 1D/2D/3D hypercubic lattice, enumerated row-major.
class Lattice {
public:
    Lattice(int dim, std::vector<int> shape, double spacing, bool periodic);

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] const std::vector<int>& shape() const { return shape_; }
    [[nodiscard]] double spacing() const { return spacing_; }
    [[nodiscard]] bool periodic() const { return periodic_; }
    [[nodiscard]] std::size_t size() const { return positions_.size(); }
    [[nodiscard]] const std::vector<Vec3>& positions() const { return positions_; }

    /// Integer coordinates of site i.
    [[nodiscard]] std::array<int, 3> coords(std::size_t i) const;

    /// r_i - r_j in lattice units, minimum image when periodic.
    [[nodiscard]] Vec3 separation(std::size_t i, std::size_t j) const;

    /// Offsets along `axis` from the reference site to every site on that axis:
    /// the minimum-image set when periodic, otherwise measured from the central site.
    [[nodiscard]] std::pair<int, int> axis_offset_range(int axis) const;

private:
    int dim_;
    std::vector<int> shape_;
    double spacing_;
    bool periodic_;
    std::vector<Vec3> positions_;
};

[[nodiscard]] Lattice build_lattice(int dim, const std::vector<int>& shape, double spacing, bool periodic = false);

[[nodiscard]] Lattice lattice_from(const ModelParams& p, bool periodic);

[[nodiscard]] double norm(const Vec3& v);
[[nodiscard]] double dot(const Vec3& a, const Vec3& b);

}  // namespace matterwave
