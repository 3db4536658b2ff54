#include "ccolap/cco.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "ccolap/errors.hpp"

namespace ccolap {

namespace {

Pattern merged_pattern(const Pattern& a, const Pattern& b) {
  std::set<IndexPair> s(a.begin(), a.end());
  s.insert(b.begin(), b.end());
  return Pattern(s.begin(), s.end());
}

void check_sorted_pattern(const Pattern& pattern, int n, const char* which) {
  IndexPair prev{-1, -1};
  for (const auto& e : pattern) {
    if (e.first < 0 || e.second >= n || e.first >= e.second)
      throw ValidationError(std::string(which) + ": pattern edge out of range");
    if (!(prev < e))
      throw ValidationError(std::string(which) + ": pattern not sorted unique");
    prev = e;
  }
}

Eigen::VectorXd weights_on(const LaplacianMatrix& l, const Pattern& pattern) {
  Eigen::VectorXd u(static_cast<Eigen::Index>(pattern.size()));
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    const double w = -l.m(pattern[k].first, pattern[k].second);
    u(k) = w == 0.0 ? 0.0 : w;
  }
  return u;
}

void check_problem(const CcoProblem& p) {
  if (!(p.alpha > 0.0)) throw ValidationError("penalty weight must be positive");
  check_laplacian(p.l1);
  check_laplacian(p.l2);
  check_sorted_pattern(p.pattern1, p.l1.n(), "first graph");
  check_sorted_pattern(p.pattern2, p.l2.n(), "second graph");
  for (const auto& e : p.l1.pattern)
    if (!std::binary_search(p.pattern1.begin(), p.pattern1.end(), e))
      throw ValidationError("first pattern must cover the first graph's edges");
  for (const auto& e : p.l2.pattern)
    if (!std::binary_search(p.pattern2.begin(), p.pattern2.end(), e))
      throw ValidationError("second pattern must cover the second graph's edges");
  if (p.correspondence) {
    const auto& fc = *p.correspondence;
    if (fc.t12.rows() != p.l2.n() || fc.t12.cols() != p.l1.n() ||
        fc.t21.rows() != p.l1.n() || fc.t21.cols() != p.l2.n())
      throw ValidationError("transfer operator shapes do not match the graphs");
  } else if (p.l1.n() != p.l2.n()) {
    throw ValidationError(
        "plain commutation needs equal vertex counts; set a correspondence");
  }
}

void check_weights(const CcoProblem& p, const Eigen::VectorXd& u1,
                   const Eigen::VectorXd& u2) {
  if (u1.size() != static_cast<Eigen::Index>(p.pattern1.size()) ||
      u2.size() != static_cast<Eigen::Index>(p.pattern2.size()))
    throw ValidationError("weight vector lengths must match the patterns");
  for (Eigen::Index k = 0; k < u1.size(); ++k)
    if (!(u1(k) >= 0.0 && u1(k) <= 1.0))
      throw ValidationError("weights must lie in [0,1]");
  for (Eigen::Index k = 0; k < u2.size(); ++k)
    if (!(u2(k) >= 0.0 && u2(k) <= 1.0))
      throw ValidationError("weights must lie in [0,1]");
}

// Objective evaluation on explicit targets; the solver feeds rescaled ones.
struct Evaluator {
  const Pattern& pat1;
  const Pattern& pat2;
  Eigen::MatrixXd target1, target2;
  double alpha;
  const FunctionalCorrespondence* fc;

  Eigen::MatrixXd lt1, lt2, q, comm, m1, m2, inner;

  Evaluator(const Pattern& p1, const Pattern& p2, Eigen::MatrixXd t1,
            Eigen::MatrixXd t2, double a, const FunctionalCorrespondence* f)
      : pat1(p1), pat2(p2), target1(std::move(t1)), target2(std::move(t2)),
        alpha(a), fc(f) {
    lt1.resize(target1.rows(), target1.cols());
    lt2.resize(target2.rows(), target2.cols());
  }

  static void assemble(Eigen::MatrixXd& lt, const Pattern& pattern,
                       const Eigen::VectorXd& u) {
    lt.setZero();
    for (Eigen::Index k = 0; k < u.size(); ++k) {
      const auto [i, j] = pattern[k];
      const double w = u(k);
      lt(i, j) -= w;
      lt(j, i) -= w;
      lt(i, i) += w;
      lt(j, j) += w;
    }
  }

  // commutator of lt1 with lt2 routed through the transfer operators if set
  void form_commutator() {
    if (fc) {
      inner.noalias() = fc->t21 * lt2;
      q.noalias() = inner * fc->t12;
    } else {
      q = lt2;
    }
    comm.noalias() = lt1 * q;
    comm.noalias() -= q * lt1;
  }

  CostBreakdown cost(const Eigen::VectorXd& u1, const Eigen::VectorXd& u2) {
    assemble(lt1, pat1, u1);
    assemble(lt2, pat2, u2);
    form_commutator();
    CostBreakdown out;
    out.distance_term =
        (lt1 - target1).squaredNorm() + (lt2 - target2).squaredNorm();
    out.commutator_term = alpha * comm.squaredNorm();
    out.total = out.distance_term + out.commutator_term;
    return out;
  }

  void gradient(const Eigen::VectorXd& u1, const Eigen::VectorXd& u2,
                Eigen::VectorXd& g1, Eigen::VectorXd& g2) {
    assemble(lt1, pat1, u1);
    assemble(lt2, pat2, u2);
    form_commutator();

    g1.resize(u1.size());
    g2.resize(u2.size());
    for (Eigen::Index k = 0; k < u1.size(); ++k) {
      const auto [i, j] = pat1[k];
      const auto d = [&](int r, int c) { return lt1(r, c) - target1(r, c); };
      g1(k) = 2.0 * (d(i, i) + d(j, j) - 2.0 * d(i, j));
    }
    for (Eigen::Index k = 0; k < u2.size(); ++k) {
      const auto [i, j] = pat2[k];
      const auto d = [&](int r, int c) { return lt2(r, c) - target2(r, c); };
      g2(k) = 2.0 * (d(i, i) + d(j, j) - 2.0 * d(i, j));
    }

    // each weight enters two diagonal entries positively and the symmetric
    // off-diagonal pair negatively; contract the matrix derivative with that
    if (!fc) {
      m1.noalias() = comm * lt2;
      m1 += m1.transpose().eval();
      m2.noalias() = comm * lt1;
      m2 += m2.transpose().eval();
      for (Eigen::Index k = 0; k < u1.size(); ++k) {
        const auto [i, j] = pat1[k];
        g1(k) += 2.0 * alpha * (m1(i, i) + m1(j, j) - 2.0 * m1(i, j));
      }
      for (Eigen::Index k = 0; k < u2.size(); ++k) {
        const auto [i, j] = pat2[k];
        g2(k) -= 2.0 * alpha * (m2(i, i) + m2(j, j) - 2.0 * m2(i, j));
      }
    } else {
      m1.noalias() = comm * q.transpose();
      m1.noalias() -= q.transpose() * comm;
      inner.noalias() = lt1 * comm;
      inner.noalias() -= comm * lt1;
      m2.noalias() = fc->t21.transpose() * inner * fc->t12.transpose();
      for (Eigen::Index k = 0; k < u1.size(); ++k) {
        const auto [i, j] = pat1[k];
        g1(k) += 2.0 * alpha * (m1(i, i) + m1(j, j) - m1(i, j) - m1(j, i));
      }
      for (Eigen::Index k = 0; k < u2.size(); ++k) {
        const auto [i, j] = pat2[k];
        g2(k) += 2.0 * alpha * (m2(i, i) + m2(j, j) - m2(i, j) - m2(j, i));
      }
    }
  }

  // cost along u + t d is a quartic in t: distance is quadratic and the
  // commutator is bilinear in the two weight vectors; returns the smallest
  // positive stationary point with ascent on exit, 0 when none exists
  double line_minimizer(const Eigen::VectorXd& u1, const Eigen::VectorXd& u2,
                        const Eigen::VectorXd& d1, const Eigen::VectorXd& d2) {
    assemble(lt1, pat1, u1);
    assemble(lt2, pat2, u2);
    Eigen::MatrixXd e1(lt1.rows(), lt1.cols()), e2(lt2.rows(), lt2.cols());
    assemble(e1, pat1, d1);
    assemble(e2, pat2, d2);

    Eigen::MatrixXd q0, dq;
    if (fc) {
      q0.noalias() = fc->t21 * lt2 * fc->t12;
      dq.noalias() = fc->t21 * e2 * fc->t12;
    } else {
      q0 = lt2;
      dq = e2;
    }
    const Eigen::MatrixXd c0 = lt1 * q0 - q0 * lt1;
    const Eigen::MatrixXd c1 =
        (e1 * q0 - q0 * e1) + (lt1 * dq - dq * lt1);
    const Eigen::MatrixXd c2 = e1 * dq - dq * e1;

    const double b1 = 2.0 * ((lt1 - target1).cwiseProduct(e1).sum() +
                             (lt2 - target2).cwiseProduct(e2).sum());
    const double b2 = e1.squaredNorm() + e2.squaredNorm();
    const double a1 = b1 + alpha * 2.0 * c0.cwiseProduct(c1).sum();
    const double a2 = b2 + alpha * (c1.squaredNorm() +
                                    2.0 * c0.cwiseProduct(c2).sum());
    const double a3 = alpha * 2.0 * c1.cwiseProduct(c2).sum();
    const double a4 = alpha * c2.squaredNorm();
    if (!(a1 < 0.0)) return 0.0;

    const auto dphi = [&](double t) {
      return a1 + t * (2.0 * a2 + t * (3.0 * a3 + t * 4.0 * a4));
    };
    double hi = a2 > 0.0 ? std::max(-a1 / (2.0 * a2), 1e-12) : 1.0;
    int grow = 0;
    while (dphi(hi) <= 0.0 && grow < 200) {
      hi *= 2.0;
      ++grow;
    }
    if (dphi(hi) <= 0.0) return 0.0;
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      (dphi(mid) <= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }
};

Eigen::VectorXd clip_box(Eigen::VectorXd v) {
  return v.cwiseMax(0.0).cwiseMin(1.0);
}

std::vector<char> bound_mask(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  std::vector<char> mask(a.size() + b.size());
  for (Eigen::Index k = 0; k < a.size(); ++k)
    mask[k] = a(k) == 0.0 ? 1 : (a(k) == 1.0 ? 2 : 0);
  for (Eigen::Index k = 0; k < b.size(); ++k)
    mask[a.size() + k] = b(k) == 0.0 ? 1 : (b(k) == 1.0 ? 2 : 0);
  return mask;
}

void project_gradient(const Eigen::VectorXd& u, const Eigen::VectorXd& g,
                      Eigen::VectorXd& pg) {
  pg.resize(u.size());
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    if (u(k) == 0.0)
      pg(k) = std::min(g(k), 0.0);
    else if (u(k) == 1.0)
      pg(k) = std::max(g(k), 0.0);
    else
      pg(k) = g(k);
  }
}

}  // namespace

CcoProblem make_problem(const LaplacianMatrix& l1, const LaplacianMatrix& l2,
                        PatternMode mode, double alpha, const OptSettings& opt) {
  check_laplacian(l1);
  check_laplacian(l2);
  if (!(alpha > 0.0)) throw ValidationError("penalty weight must be positive");
  CcoProblem p;
  p.l1 = l1;
  p.l2 = l2;
  if (mode == PatternMode::own) {
    p.pattern1 = l1.pattern;
    p.pattern2 = l2.pattern;
  } else {
    if (l1.n() != l2.n())
      throw ValidationError("pattern union needs equal vertex counts");
    p.pattern1 = merged_pattern(l1.pattern, l2.pattern);
    p.pattern2 = p.pattern1;
  }
  p.alpha = alpha;
  p.opt = opt;
  return p;
}

CcoProblem make_problem(const WeightedGraph& g1, const WeightedGraph& g2,
                        PatternMode mode, double alpha, const OptSettings& opt) {
  return make_problem(laplacian(g1), laplacian(g2), mode, alpha, opt);
}

Eigen::VectorXd initial_weights_1(const CcoProblem& p) {
  return weights_on(p.l1, p.pattern1);
}

Eigen::VectorXd initial_weights_2(const CcoProblem& p) {
  return weights_on(p.l2, p.pattern2);
}

CostBreakdown cco_cost(const CcoProblem& p, const Eigen::VectorXd& u1,
                       const Eigen::VectorXd& u2) {
  check_problem(p);
  check_weights(p, u1, u2);
  Evaluator eval(p.pattern1, p.pattern2, p.l1.m, p.l2.m, p.alpha,
                 p.correspondence ? &*p.correspondence : nullptr);
  return eval.cost(u1, u2);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> cco_gradient(
    const CcoProblem& p, const Eigen::VectorXd& u1, const Eigen::VectorXd& u2) {
  check_problem(p);
  check_weights(p, u1, u2);
  Evaluator eval(p.pattern1, p.pattern2, p.l1.m, p.l2.m, p.alpha,
                 p.correspondence ? &*p.correspondence : nullptr);
  Eigen::VectorXd g1, g2;
  eval.gradient(u1, u2, g1, g2);
  return {std::move(g1), std::move(g2)};
}

CcoResult cco_solve(const CcoProblem& p,
                    const std::optional<Eigen::VectorXd>& init1,
                    const std::optional<Eigen::VectorXd>& init2) {
  check_problem(p);

  const Eigen::VectorXd w1 = weights_on(p.l1, p.pattern1);
  const Eigen::VectorXd w2 = weights_on(p.l2, p.pattern2);
  Eigen::VectorXd u1 = init1 ? *init1 : w1;
  Eigen::VectorXd u2 = init2 ? *init2 : w2;
  if (u1.size() != w1.size() || u2.size() != w2.size())
    throw ValidationError("starting weights must match the patterns");

  // rescale so the largest input weight is 1; the box [0,1] then contains the
  // starting point and the objective terms keep their relative balance
  double s = 0.0;
  if (w1.size()) s = std::max(s, w1.maxCoeff());
  if (w2.size()) s = std::max(s, w2.maxCoeff());
  if (s <= 0.0) s = 1.0;
  const double s2 = s * s;

  Evaluator eval(p.pattern1, p.pattern2, p.l1.m / s, p.l2.m / s, p.alpha * s2,
                 p.correspondence ? &*p.correspondence : nullptr);
  Eigen::VectorXd v1 = clip_box(u1 / s);
  Eigen::VectorXd v2 = clip_box(u2 / s);

  CcoResult out;
  auto record = [&](const CostBreakdown& parts, double step) {
    out.history.push_back({s2 * parts.total, s2 * parts.distance_term,
                           s2 * parts.commutator_term, step});
  };

  Eigen::VectorXd g1, g2, pg1, pg2, d1, d2, pg1_prev, pg2_prev;
  double pg_inf = 0.0;

  auto minimize = [&](double stage_alpha, bool recording) {
    eval.alpha = stage_alpha;
    CostBreakdown parts = eval.cost(v1, v2);
    if (recording) record(parts, 0.0);

    std::vector<char> active = bound_mask(v1, v2);
    bool have_prev_pg = false;
    bool reset_direction = true;
    bool converged = false;
    int stall = 0;

    for (int iter = 0; iter < p.opt.max_iters; ++iter) {
      eval.gradient(v1, v2, g1, g2);
      project_gradient(v1, g1, pg1);
      project_gradient(v2, g2, pg2);
      pg_inf = std::max(pg1.size() ? pg1.cwiseAbs().maxCoeff() : 0.0,
                        pg2.size() ? pg2.cwiseAbs().maxCoeff() : 0.0);
      if (pg_inf < p.opt.grad_tol) {
        converged = true;
        break;
      }

      if (reset_direction || !have_prev_pg ||
          (p.opt.cg_restart > 0 && iter % p.opt.cg_restart == 0)) {
        d1 = -pg1;
        d2 = -pg2;
      } else {
        const double denom = pg1_prev.squaredNorm() + pg2_prev.squaredNorm();
        double beta = 0.0;
        if (denom > 0.0)
          beta = std::max(0.0, (pg1.dot(pg1 - pg1_prev) +
                                pg2.dot(pg2 - pg2_prev)) /
                                   denom);
        d1 = -pg1 + beta * d1;
        d2 = -pg2 + beta * d2;
        if (pg1.dot(d1) + pg2.dot(d2) >= 0.0) {
          d1 = -pg1;
          d2 = -pg2;
        }
      }
      pg1_prev = pg1;
      pg2_prev = pg2;
      have_prev_pg = true;
      reset_direction = false;

      // restricted to the line, the objective is an exact quartic; its
      // unconstrained minimizer is the first trial step, capped so that no
      // weight moves further than 0.25 at once: an uncapped step can vault
      // into the spurious minimum that zeroes one Laplacian outright
      double t = eval.line_minimizer(v1, v2, d1, d2);
      if (!(t > 0.0)) t = 1.0 / (1.0 + pg_inf);
      const double d_inf = std::max(d1.size() ? d1.cwiseAbs().maxCoeff() : 0.0,
                                    d2.size() ? d2.cwiseAbs().maxCoeff() : 0.0);
      if (d_inf > 0.0) t = std::min(t, 0.25 / d_inf);
      bool accepted = false;
      const double f = parts.total;
      for (int back = 0; back < 60; ++back) {
        const Eigen::VectorXd c1 = clip_box(v1 + t * d1);
        const Eigen::VectorXd c2 = clip_box(v2 + t * d2);
        const double pred = g1.dot(c1 - v1) + g2.dot(c2 - v2);
        if (pred < 0.0) {
          const CostBreakdown trial = eval.cost(c1, c2);
          if (trial.total <= f + p.opt.armijo_sigma * pred) {
            v1 = c1;
            v2 = c2;
            parts = trial;
            accepted = true;
            break;
          }
        }
        t *= 0.5;
      }
      if (!accepted) break;

      if (recording) record(parts, t);
      auto now_active = bound_mask(v1, v2);
      if (now_active != active) reset_direction = true;
      active = std::move(now_active);

      // a lone tiny decrease is not stationarity on stiff problems; only a
      // sustained run of them stops the loop, and without the converged flag
      if (f - parts.total < 1e-13 * std::max(std::abs(f), 1e-300)) {
        if (++stall >= 25) break;
      } else {
        stall = 0;
      }
    }
    return converged;
  };

  // a cold start descends mostly against the penalty and can destroy one
  // Laplacian before the distance term has any say; ramping the penalty up
  // to the requested value keeps the iterates in the faithful basin
  const double alpha_full = p.alpha * s2;
  if (!init1 && !init2) {
    for (double a = std::min(alpha_full, 1.0); a < alpha_full; a *= 10.0)
      minimize(a, false);
  }
  out.converged = minimize(alpha_full, true);

  out.iterations = static_cast<int>(out.history.size()) - 1;
  out.grad_inf_norm = pg_inf;
  out.u1 = s * v1;
  out.u2 = s * v2;
  out.lt1 = laplacian_from_weights(p.l1.n(), p.pattern1, out.u1);
  out.lt2 = laplacian_from_weights(p.l2.n(), p.pattern2, out.u2);
  if (p.correspondence) {
    const Eigen::MatrixXd q =
        p.correspondence->t21 * out.lt2.m * p.correspondence->t12;
    out.commutator_frob = (out.lt1.m * q - q * out.lt1.m).norm();
  } else {
    out.commutator_frob = commutator_norm(out.lt1.m, out.lt2.m);
  }
  return out;
}

ClEstimate cL_value(const LaplacianMatrix& l1, const LaplacianMatrix& l2,
                    PatternMode mode, const std::vector<double>& alphas,
                    const OptSettings& opt) {
  if (alphas.empty()) throw ValidationError("penalty schedule must not be empty");
  ClEstimate est;
  std::optional<Eigen::VectorXd> warm1, warm2;
  int chosen = -1;
  for (const double alpha : alphas) {
    const CcoProblem p = make_problem(l1, l2, mode, alpha, opt);
    const CcoResult r = cco_solve(p, warm1, warm2);
    warm1 = r.u1;
    warm2 = r.u2;
    const CostBreakdown parts = cco_cost(p, r.u1, r.u2);
    est.stages.push_back(
        {alpha, parts.distance_term, r.commutator_frob, r.converged, r.iterations});
    const auto& stage = est.stages.back();
    if (chosen < 0 || stage.commutator_frob < est.stages[chosen].commutator_frob)
      chosen = static_cast<int>(est.stages.size()) - 1;
  }
  const auto& best = est.stages[chosen];
  est.value = best.distance_term;
  est.commutator_frob = best.commutator_frob;
  est.alpha = best.alpha;
  est.commuting = best.commutator_frob < commuting_threshold(l1.n());
  return est;
}

JointBasis jointly_diagonalize_result(const CcoResult& r) {
  if (r.lt1.n() != r.lt2.n())
    throw ValidationError("joint basis needs equal vertex counts");
  if (!(r.commutator_frob < commuting_threshold(r.lt1.n())))
    throw ValidationError("result does not commute numerically");
  return jade(r.lt1.m, r.lt2.m);
}

}  // namespace ccolap
