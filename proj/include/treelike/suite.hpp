#ifndef TREELIKE_SUITE_HPP
#define TREELIKE_SUITE_HPP

#include <optional>
#include <string>
#include <vector>

#include "treelike/construct.hpp"
#include "treelike/decide.hpp"
#include "treelike/height.hpp"

namespace treelike {

struct Check {
  std::string name;
  int n = 0;  // level, 0 when not level-specific
  bool passed = true;
  std::string detail;
};

// Inductive hypotheses (1)-(7) for tower[index]; the previous level is
// needed for (2), (3) and (5) when n > 1.
std::vector<Check> check_hypotheses(const std::vector<TowerLevel>& tower, std::size_t index);

// sup |g_n pi_n - gt_n pit_n|^2 <= 2 / 4^(n-1).
Check check_gap_bound(const TowerLevel& level);
// Collapsing the newest leaves moves points by exactly 1/2^(n-1) and
// sqrt2/2^(n-1) (n >= 2).
Check check_retraction_displacement(const TowerLevel& level);
// Every edge of both trees maps isometrically.
Check check_isometry(const TowerLevel& level);
// Breakpoint images of g_n pi_n are sqrt2/2^(n-1)-dense on the grid of pitch
// 1/2^(n+1) in the base triangle (n >= 2).
Check check_density(const TowerLevel& level);
// Edge and breakpoint counts against the recurrences and closed forms, and
// the path lengths 2^n and sqrt2 * 2^(n-1).
Check check_counts(const std::vector<TowerLevel>& tower, std::size_t index);
// For m >= n, breakpoint images of level m over interval i of level n lie
// in triangle i of level n.
Check check_containment(const std::vector<TowerLevel>& tower, std::size_t index);

// The loop pi_1 * reverse(pi_n) in E_n (or its Et counterpart), its image
// in the plane, the tree-derived height and the two exact checks.
struct Certificate {
  int n = 0;
  bool tilde = false;
  std::optional<TreeWitness> witness;
  std::optional<PlanePath> loop;
  ClassReport classes;
  std::string error;  // set when the level could not be certified at all

  bool passed() const { return error.empty() && witness && witness->check.passed() && classes.passed(); }
};

// Refinement used when none is requested: 1 up to level 4, 0 above.
unsigned default_refine(int n);

Certificate certify(const std::vector<TowerLevel>& tower, std::size_t index, bool tilde, unsigned refine,
                    unsigned workers = 1);

// alpha * reverse(beta) as a plane loop.
PlanePath alpha_beta_loop(const TowerLevel& level1);

struct SuiteOptions {
  std::optional<unsigned> refine;  // default_refine(n) when unset
  unsigned workers = 1;
};

struct SuiteReport {
  std::vector<Check> hypotheses;
  std::vector<Check> gap_bound;
  std::vector<Check> retraction;
  std::vector<Check> isometry;
  std::vector<Check> density;
  std::vector<Check> counts;
  std::vector<Check> containment;
  std::vector<Certificate> certificates;
  Verdict alpha_gamma;  // alpha * reverse(gamma_n), top level
  Verdict beta_gamma;   // beta * reverse(gamma~_n), top level
  Verdict alpha_beta;

  bool verdicts_passed() const;
  bool passed() const;
};

SuiteReport run_suite(const std::vector<TowerLevel>& tower, const SuiteOptions& options);

}  // namespace treelike

#endif  // TREELIKE_SUITE_HPP
