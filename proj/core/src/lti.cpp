#include "mrac/lti.hpp"

#include <string>

namespace mrac {

namespace {

std::string shape(const MatrixXd& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

void StateSpaceBlock::validate() const {
  const Index n = a.rows();
  if (a.cols() != n) {
    throw InvalidArgument("state matrix must be square, got " + shape(a));
  }
  if (b.rows() != n) {
    throw InvalidArgument("input matrix has " + std::to_string(b.rows()) +
                          " rows, expected " + std::to_string(n));
  }
  if (c.cols() != n) {
    throw InvalidArgument("output matrix has " + std::to_string(c.cols()) +
                          " columns, expected " + std::to_string(n));
  }
  if (d.rows() != c.rows() || d.cols() != b.cols()) {
    throw InvalidArgument("feedthrough is " + shape(d) + ", expected " +
                          std::to_string(c.rows()) + "x" + std::to_string(b.cols()));
  }
  if (x.size() != n) {
    throw InvalidArgument("state vector has length " + std::to_string(x.size()) +
                          ", expected " + std::to_string(n));
  }
}

std::complex<double> StateSpaceBlock::frequency_response(std::complex<double> s) const {
  if (inputs() != 1 || outputs() != 1) {
    throw InvalidArgument("frequency_response requires a SISO block");
  }
  const Index n = states();
  std::complex<double> g = d(0, 0);
  if (n == 0) {
    return g;
  }
  Eigen::MatrixXcd m = -a.cast<std::complex<double>>();
  m.diagonal().array() += s;
  const Eigen::VectorXcd v = m.partialPivLu().solve(b.col(0).cast<std::complex<double>>());
  g += (c.row(0).cast<std::complex<double>>() * v)(0);
  return g;
}

BlockDerivative block_derivative(const StateSpaceBlock& block,
                                 const Eigen::Ref<const VectorXd>& u) {
  return block_derivative(block, block.x, u);
}

BlockDerivative block_derivative(const StateSpaceBlock& block,
                                 const Eigen::Ref<const VectorXd>& x,
                                 const Eigen::Ref<const VectorXd>& u) {
  if (x.size() != block.states()) {
    throw InvalidArgument("block_derivative: state length " + std::to_string(x.size()) +
                          " does not match " + std::to_string(block.states()));
  }
  if (u.size() != block.inputs()) {
    throw InvalidArgument("block_derivative: input length " + std::to_string(u.size()) +
                          " does not match " + std::to_string(block.inputs()));
  }
  BlockDerivative out;
  out.dx = block.a * x + block.b * u;
  out.y = block.c * x + block.d * u;
  return out;
}

VectorFilter::VectorFilter(StateSpaceBlock siso, Index width)
    : proto_(std::move(siso)), width_(width) {
  proto_.validate();
  if (proto_.inputs() != 1 || proto_.outputs() != 1) {
    throw InvalidArgument("VectorFilter prototype must be SISO");
  }
  if (width < 0) {
    throw InvalidArgument("VectorFilter width must be non-negative");
  }
  b_col_ = proto_.b.col(0);
  c_row_ = proto_.c.row(0);
  d_ = proto_.d(0, 0);
}

void VectorFilter::derivative(const Eigen::Ref<const MatrixXd>& states,
                              const Eigen::Ref<const VectorXd>& u,
                              Eigen::Ref<MatrixXd> dstates) const {
  dstates.noalias() = proto_.a * states;
  dstates.noalias() += b_col_ * u.transpose();
}

VectorXd VectorFilter::output(const Eigen::Ref<const MatrixXd>& states,
                              const Eigen::Ref<const VectorXd>& u) const {
  VectorXd y = (c_row_ * states).transpose();
  y += d_ * u;
  return y;
}

VectorXd VectorFilter::output(const Eigen::Ref<const MatrixXd>& states) const {
  return (c_row_ * states).transpose();
}

void advance_block(StateSpaceBlock& block, const Eigen::Ref<const VectorXd>& u, double dt) {
  const VectorXd held = u;
  block.x = rk4_step(
      [&](double, const VectorXd& x) -> VectorXd {
        return block.a * x + block.b * held;
      },
      0.0, block.x, dt);
}

}  // namespace mrac
