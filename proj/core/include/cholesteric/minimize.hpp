#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cholesteric/energy.hpp"

namespace chol {

enum class DescentMethod {
  GradientDescent,  // preconditioned steepest descent
  LBFGS,            // limited-memory quasi-Newton on the same preconditioned metric
};

struct MinimizeOptions {
  DescentMethod method = DescentMethod::LBFGS;
  int max_iterations = 4000;
  double gradient_tol = 1e-5;  // sup-norm of the preconditioned gradient
  double margin = 1e-4;        // physicality margin kept by the line search
  bool slab = true;            // keep fields uniform across each x3-slice
  int memory = 10;
};

struct MinimizeResult {
  explicit MinimizeResult(const QField& f) : field(f) {}

  QField field;
  std::vector<double> energy_trace;  // accepted iterates, nonincreasing
  int iterations = 0;
  bool converged = false;
  bool stagnated = false;  // line search fell below a step of 1e-14
  double gradient_norm = 0.0;
  double max_biaxiality = 0.0;
  double xi_lock = 0.0;  // ||xi - (sc/s0) Q|| in grid L2
  double q_norm = 0.0;   // ||Q|| in grid L2
};

/// Throws std::domain_error if the initial field is not physical with the margin.
MinimizeResult minimize(const QField& initial, const EnergyModel& model, const MinimizeOptions& opt = {});

struct MultiStartResult {
  MinimizeResult best;
  std::vector<std::uint64_t> seeds;  // one random_field seed per start
  std::vector<double> energies;      // final energy of each start
  int best_index = 0;
};

/// Descends from `starts` random fields and keeps the lowest final energy
/// (first on ties). Start seeds are drawn from SplitMix64(seed). Winding
/// sectors on the torus are separated by barriers, so a single random start
/// does not reliably reach the ground state.
MultiStartResult minimize_random_starts(const EnergyModel& model, std::uint64_t seed, int starts,
                                        const MinimizeOptions& opt = {}, double amplitude = 0.05);

}  // namespace chol
