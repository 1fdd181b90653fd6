#include "sbss/joint_diagonalization.hpp"

#include <cmath>

#include "sbss/error.hpp"

namespace sbss {

double off_diagonal_mass(std::span<const Eigen::MatrixXd> matrices) {
  double total = 0.0;
  for (const auto& m : matrices) {
    total += m.squaredNorm() - m.diagonal().squaredNorm();
  }
  return total;
}

JointDiagonalization joint_diagonalize(std::span<const Eigen::MatrixXd> matrices,
                                       const JointDiagonalizationOptions& options) {
  if (matrices.empty()) throw_validation("empty_matrix_set", "no matrices to diagonalize");
  const Eigen::Index p = matrices.front().rows();
  for (std::size_t k = 0; k < matrices.size(); ++k) {
    const auto& m = matrices[k];
    if (m.rows() != p || m.cols() != p) {
      throw_validation("shape_mismatch", "matrix " + std::to_string(k) + " is not " +
                                             std::to_string(p) + "x" + std::to_string(p));
    }
    const double scale = std::max(1.0, m.norm());
    if ((m - m.transpose()).norm() > 1e-10 * scale) {
      throw_validation("not_symmetric", "matrix " + std::to_string(k) + " is not symmetric");
    }
  }

  std::vector<Eigen::MatrixXd> work(matrices.begin(), matrices.end());
  JointDiagonalization out;
  out.rotation = Eigen::MatrixXd::Identity(p, p);
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(p, p);
  out.off_diagonal_trace.push_back(off_diagonal_mass(work));

  while (out.sweeps < options.max_sweeps) {
    ++out.sweeps;
    bool rotated = false;
    for (Eigen::Index a = 0; a + 1 < p; ++a) {
      for (Eigen::Index b = a + 1; b < p; ++b) {
        double g00 = 0.0, g01 = 0.0, g11 = 0.0;
        for (const auto& m : work) {
          const double h0 = m(a, a) - m(b, b);
          const double h1 = m(a, b) + m(b, a);
          g00 += h0 * h0;
          g01 += h0 * h1;
          g11 += h1 * h1;
        }
        const double ton = g00 - g11;
        const double toff = 2.0 * g01;
        const double theta = 0.5 * std::atan2(toff, ton + std::hypot(ton, toff));
        if (std::abs(theta) <= options.angle_tolerance) continue;
        rotated = true;
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        for (auto& m : work) {
          const Eigen::RowVectorXd ra = m.row(a);
          const Eigen::RowVectorXd rb = m.row(b);
          m.row(a) = c * ra + s * rb;
          m.row(b) = -s * ra + c * rb;
          const Eigen::VectorXd ca = m.col(a);
          const Eigen::VectorXd cb = m.col(b);
          m.col(a) = c * ca + s * cb;
          m.col(b) = -s * ca + c * cb;
        }
        const Eigen::VectorXd va = v.col(a);
        const Eigen::VectorXd vb = v.col(b);
        v.col(a) = c * va + s * vb;
        v.col(b) = -s * va + c * vb;
      }
    }
    out.off_diagonal_trace.push_back(off_diagonal_mass(work));
    if (!rotated) {
      out.converged = true;
      break;
    }
  }
  out.rotation = v.transpose();
  return out;
}

}  // namespace sbss
