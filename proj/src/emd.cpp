#include "saleval/emd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace saleval {

void GroundDistanceSpec::validate() const {
  if (!(saturation >= 1.0)) throw std::invalid_argument("ground distance: saturation must be >= 1");
}

double GroundDistanceSpec::operator()(int i, int j) const {
  return std::min(static_cast<double>(std::abs(i - j)), saturation);
}

Eigen::MatrixXd GroundDistanceSpec::matrix(int n1, int n2) const {
  Eigen::MatrixXd d(n1, n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) d(i, j) = (*this)(i, j);
  return d;
}

FlowSolution min_cost_transport(const Eigen::VectorXd& supply, const Eigen::VectorXd& demand,
                                const Eigen::MatrixXd& cost) {
  const auto n1 = static_cast<int>(supply.size());
  const auto n2 = static_cast<int>(demand.size());
  if (cost.rows() != n1 || cost.cols() != n2) throw std::invalid_argument("min_cost_transport: cost matrix shape mismatch");
  if ((supply.array() < 0).any() || (demand.array() < 0).any() || !supply.allFinite() || !demand.allFinite())
    throw std::invalid_argument("min_cost_transport: masses must be finite and non-negative");
  if ((cost.array() < 0).any() || !cost.allFinite())
    throw std::invalid_argument("min_cost_transport: costs must be finite and non-negative");

  const double total_s = supply.sum();
  const double total_d = demand.sum();
  const double target = std::min(total_s, total_d);
  const double tol = 1e-13 * std::max({total_s, total_d, std::numeric_limits<double>::min()});

  Eigen::VectorXd rem_s = supply;
  Eigen::VectorXd rem_d = demand;
  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(n1, n2);
  // Node v < n1 is supply bin v; node n1 + j is demand bin j.
  const int nodes = n1 + n2;
  Eigen::VectorXd potential = Eigen::VectorXd::Zero(nodes);
  constexpr double inf = std::numeric_limits<double>::infinity();

  double moved = 0.0;
  const long max_rounds = 64L * (nodes + 1) * (nodes + 1) + 1000;
  for (long round = 0; target - moved > tol; ++round) {
    if (round > max_rounds) throw std::runtime_error("min_cost_transport: no convergence");

    std::vector<double> dist(static_cast<std::size_t>(nodes), inf);
    std::vector<int> parent(static_cast<std::size_t>(nodes), -1);
    std::vector<bool> done(static_cast<std::size_t>(nodes), false);
    for (int i = 0; i < n1; ++i)
      if (rem_s(i) > tol) dist[static_cast<std::size_t>(i)] = 0.0;

    for (;;) {
      int u = -1;
      for (int v = 0; v < nodes; ++v)
        if (!done[static_cast<std::size_t>(v)] && dist[static_cast<std::size_t>(v)] < inf &&
            (u < 0 || dist[static_cast<std::size_t>(v)] < dist[static_cast<std::size_t>(u)]))
          u = v;
      if (u < 0) break;
      done[static_cast<std::size_t>(u)] = true;
      const double du = dist[static_cast<std::size_t>(u)];
      if (u < n1) {
        for (int j = 0; j < n2; ++j) {
          const int v = n1 + j;
          const double rc = std::max(0.0, cost(u, j) + potential(u) - potential(v));
          if (du + rc < dist[static_cast<std::size_t>(v)]) {
            dist[static_cast<std::size_t>(v)] = du + rc;
            parent[static_cast<std::size_t>(v)] = u;
          }
        }
      } else {
        const int j = u - n1;
        for (int i = 0; i < n1; ++i) {
          if (flow(i, j) <= tol) continue;
          const double rc = std::max(0.0, -cost(i, j) + potential(u) - potential(i));
          if (du + rc < dist[static_cast<std::size_t>(i)]) {
            dist[static_cast<std::size_t>(i)] = du + rc;
            parent[static_cast<std::size_t>(i)] = u;
          }
        }
      }
    }

    int sink = -1;
    for (int j = 0; j < n2; ++j) {
      const int v = n1 + j;
      if (rem_d(j) > tol && dist[static_cast<std::size_t>(v)] < inf &&
          (sink < 0 || dist[static_cast<std::size_t>(v)] < dist[static_cast<std::size_t>(sink)]))
        sink = v;
    }
    if (sink < 0) break;  // remaining mass is below tolerance on one side

    // Bottleneck along the path.
    double amount = std::min(rem_d(sink - n1), target - moved);
    int v = sink;
    while (parent[static_cast<std::size_t>(v)] >= 0) {
      const int p = parent[static_cast<std::size_t>(v)];
      if (p >= n1) amount = std::min(amount, flow(v, p - n1));  // reverse arc demand p -> supply v
      v = p;
    }
    amount = std::min(amount, rem_s(v));

    v = sink;
    while (parent[static_cast<std::size_t>(v)] >= 0) {
      const int p = parent[static_cast<std::size_t>(v)];
      if (p < n1)
        flow(p, v - n1) += amount;
      else
        flow(v, p - n1) = std::max(0.0, flow(v, p - n1) - amount);
      v = p;
    }
    rem_s(v) -= amount;
    rem_d(sink - n1) -= amount;
    moved += amount;

    const double cap = dist[static_cast<std::size_t>(sink)];
    for (int w = 0; w < nodes; ++w) potential(w) += std::min(dist[static_cast<std::size_t>(w)], cap);
  }

  FlowSolution out;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      if (flow(i, j) > 0.0) {
        out.flows.push_back({i, j, flow(i, j)});
        out.cost += flow(i, j) * cost(i, j);
      }
  return out;
}

double emd_hat(const Eigen::VectorXd& source, const Eigen::VectorXd& sink, const GroundDistanceSpec& d) {
  d.validate();
  if (source.size() != sink.size()) throw std::invalid_argument("emd_hat: bin-count mismatch");
  const auto n = static_cast<int>(source.size());
  const FlowSolution sol = min_cost_transport(source, sink, d.matrix(n, n));
  return sol.cost + std::abs(source.sum() - sink.sum()) * d.saturation;
}

double emd_hat(const ValueHistogram& source, const ValueHistogram& sink, const GroundDistanceSpec& d) {
  if (!source.same_binning(sink)) throw std::invalid_argument("emd_hat: bin-count mismatch");
  return emd_hat(source.mass, sink.mass, d);
}

namespace lp {

namespace {

class Tableau {
 public:
  Tableau(Eigen::MatrixXd t, std::vector<int> basis, double tol) : t_(std::move(t)), basis_(std::move(basis)), tol_(tol) {}

  Eigen::MatrixXd& table() { return t_; }
  std::vector<int>& basis() { return basis_; }
  Eigen::Index rhs() const { return t_.cols() - 1; }
  Eigen::Index obj() const { return t_.rows() - 1; }

  void pivot(Eigen::Index r, Eigen::Index col) {
    t_.row(r) /= t_(r, col);
    for (Eigen::Index i = 0; i < t_.rows(); ++i)
      if (i != r && t_(i, col) != 0.0) t_.row(i) -= t_(i, col) * t_.row(r);
    basis_[static_cast<std::size_t>(r)] = static_cast<int>(col);
  }

  /// Bland's rule over columns [0, allowed).
  void optimize(Eigen::Index allowed) {
    for (long iter = 0;; ++iter) {
      if (iter > 100000) throw std::runtime_error("simplex: iteration limit");
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed; ++j)
        if (t_(obj(), j) < -tol_) {
          enter = j;
          break;
        }
      if (enter < 0) return;
      Eigen::Index leave = -1;
      double best = 0.0;
      for (Eigen::Index r = 0; r < obj(); ++r) {
        if (t_(r, enter) <= tol_) continue;
        const double ratio = t_(r, rhs()) / t_(r, enter);
        if (leave < 0 || ratio < best - tol_ ||
            (ratio <= best + tol_ && basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) throw std::runtime_error("simplex: unbounded");
      pivot(leave, enter);
    }
  }

 private:
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
  double tol_;
};

}  // namespace

Result solve_standard_form(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (b.size() != m || c.size() != n) throw std::invalid_argument("simplex: dimension mismatch");
  if ((b.array() < 0).any()) throw std::invalid_argument("simplex: b must be non-negative");
  const double tol = 1e-11 * std::max(1.0, b.cwiseAbs().maxCoeff());

  // Columns: n structural, m artificial, then rhs. Last row holds reduced costs.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  t.topLeftCorner(m, n) = A;
  t.block(0, n, m, m).setIdentity();
  t.col(n + m).head(m) = b;
  std::vector<int> basis(static_cast<std::size_t>(m));
  for (Eigen::Index r = 0; r < m; ++r) basis[static_cast<std::size_t>(r)] = static_cast<int>(n + r);
  t.row(m).head(n) = -A.colwise().sum();
  t(m, n + m) = -b.sum();

  Tableau tab(std::move(t), std::move(basis), tol);
  tab.optimize(n);
  if (-tab.table()(m, n + m) > tol * std::max<double>(1.0, static_cast<double>(m)))
    throw std::runtime_error("simplex: infeasible");

  // Drive remaining artificial variables out of the basis where possible.
  for (Eigen::Index r = 0; r < m; ++r) {
    if (tab.basis()[static_cast<std::size_t>(r)] < n) continue;
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(tab.table()(r, j)) > tol) {
        tab.pivot(r, j);
        break;
      }
  }

  Eigen::MatrixXd& tt = tab.table();
  tt.row(m).setZero();
  tt.row(m).head(n) = c.transpose();
  for (Eigen::Index r = 0; r < m; ++r) {
    const int bv = tab.basis()[static_cast<std::size_t>(r)];
    if (bv < n) tt.row(m) -= c(bv) * tt.row(r);
  }
  tab.optimize(n);

  Result res;
  res.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index r = 0; r < m; ++r) {
    const int bv = tab.basis()[static_cast<std::size_t>(r)];
    if (bv < n) res.x(bv) = std::max(0.0, tt(r, n + m));
  }
  res.objective = c.dot(res.x);
  return res;
}

}  // namespace lp

double emd_brute_oracle(const Eigen::VectorXd& h1, const Eigen::VectorXd& h2, const GroundDistanceSpec& d) {
  d.validate();
  if (h1.size() != h2.size()) throw std::invalid_argument("emd_brute_oracle: bin-count mismatch");
  const auto n = static_cast<int>(h1.size());
  if (n > 8) throw std::invalid_argument("emd_brute_oracle: at most 8 bins supported");
  if (n == 0) return 0.0;

  // Variables: f_ij (row-major), then row slacks s_i, then column slacks t_j.
  const int nf = n * n;
  const int nv = nf + 2 * n;
  const int rows = 2 * n + 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, nv);
  Eigen::VectorXd b(rows);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nv);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int f = i * n + j;
      A(i, f) = 1.0;      // sum_j f_ij + s_i = h1_i
      A(n + j, f) = 1.0;  // sum_i f_ij + t_j = h2_j
      A(2 * n, f) = 1.0;  // sum f_ij = min(total masses)
      c(f) = d(i, j);
    }
    A(i, nf + i) = 1.0;
    A(n + i, nf + n + i) = 1.0;
    b(i) = h1(i);
    b(n + i) = h2(i);
  }
  b(2 * n) = std::min(h1.sum(), h2.sum());
  const lp::Result res = lp::solve_standard_form(A, b, c);
  return res.objective + std::abs(h1.sum() - h2.sum()) * d.saturation;
}

double emd_brute_oracle(const ValueHistogram& h1, const ValueHistogram& h2, const GroundDistanceSpec& d) {
  if (!h1.same_binning(h2)) throw std::invalid_argument("emd_brute_oracle: bin-count mismatch");
  return emd_brute_oracle(h1.mass, h2.mass, d);
}

}  // namespace saleval
