#pragma once

#include <cmath>
#include <complex>
#include <sstream>
#include <utility>

#include <Eigen/Dense>

#include "mrac/errors.hpp"

namespace mrac {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// x' = A x + B u, y = C x + D u.
struct StateSpaceBlock {
  MatrixXd a;
  MatrixXd b;
  MatrixXd c;
  MatrixXd d;
  VectorXd x;

  Index states() const noexcept { return a.rows(); }
  Index inputs() const noexcept { return b.cols(); }
  Index outputs() const noexcept { return c.rows(); }

  /// Throws InvalidArgument if the matrix shapes disagree.
  void validate() const;
  /// Frequency response C (sI - A)^{-1} B + D for SISO blocks.
  std::complex<double> frequency_response(std::complex<double> s) const;
};

struct BlockDerivative {
  VectorXd dx;
  VectorXd y;
};

/// Returns (A x + B u, C x + D u) using the block's own state. No mutation.
BlockDerivative block_derivative(const StateSpaceBlock& block,
                                 const Eigen::Ref<const VectorXd>& u);
/// Same, but for an externally held state (e.g. a slice of a global vector).
BlockDerivative block_derivative(const StateSpaceBlock& block,
                                 const Eigen::Ref<const VectorXd>& x,
                                 const Eigen::Ref<const VectorXd>& u);

/// A SISO block replicated over `width` independent channels sharing one
/// (A, b, c, d). Channel states are the columns of a states() x width matrix.
class VectorFilter {
 public:
  VectorFilter() = default;
  VectorFilter(StateSpaceBlock siso, Index width);

  Index width() const noexcept { return width_; }
  Index states_per_channel() const noexcept { return proto_.states(); }
  Index state_size() const noexcept { return proto_.states() * width_; }
  const StateSpaceBlock& prototype() const noexcept { return proto_; }

  /// dX = A X + b u^T for channel input vector u (length width).
  void derivative(const Eigen::Ref<const MatrixXd>& states,
                  const Eigen::Ref<const VectorXd>& u,
                  Eigen::Ref<MatrixXd> dstates) const;
  /// y_j = c X_j + d u_j.
  VectorXd output(const Eigen::Ref<const MatrixXd>& states,
                  const Eigen::Ref<const VectorXd>& u) const;
  /// Output of strictly proper banks (feedthrough ignored / zero).
  VectorXd output(const Eigen::Ref<const MatrixXd>& states) const;

 private:
  StateSpaceBlock proto_;
  Index width_ = 0;
  // Cached row/column views of the prototype for the hot loop.
  VectorXd b_col_;
  Eigen::RowVectorXd c_row_;
  double d_ = 0.0;
};

/// Classical fourth-order Runge-Kutta step of x' = f(t, x).
///
/// Any exogenous switching decision (the tuning gain) must be captured by
/// the caller before the call so it stays frozen across the four stages.
/// Throws NonFiniteState if a stage derivative contains NaN/Inf.
template <class Derivative>
VectorXd rk4_step(Derivative&& f, double t, const VectorXd& x, double dt) {
  if (!(dt > 0.0)) {
    throw InvalidArgument("rk4_step: dt must be positive");
  }
  auto checked = [&](double ts, const VectorXd& xs) -> VectorXd {
    VectorXd k = f(ts, xs);
    if (!k.allFinite()) {
      std::ostringstream os;
      os.precision(17);
      os << "non-finite derivative at t=" << ts;
      throw NonFiniteState(os.str(), ts);
    }
    return k;
  };
  const double half = 0.5 * dt;
  const VectorXd k1 = checked(t, x);
  const VectorXd k2 = checked(t + half, x + half * k1);
  const VectorXd k3 = checked(t + half, x + half * k2);
  const VectorXd k4 = checked(t + dt, x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Advance a single block by one RK4 step with its input held constant.
void advance_block(StateSpaceBlock& block, const Eigen::Ref<const VectorXd>& u, double dt);

}  // namespace mrac
