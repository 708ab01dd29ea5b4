#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace svcmisc {

// Head-frame 3-vector: x forward, y left, z up.
using Vec3 = Eigen::Vector3d;

inline bool is_finite(const Vec3& v) {
  return v.allFinite();
}

}  // namespace svcmisc
