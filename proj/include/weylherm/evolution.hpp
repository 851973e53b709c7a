#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "weylherm/common.hpp"
#include "weylherm/coupling.hpp"
#include "weylherm/fft.hpp"
#include "weylherm/grid.hpp"
#include "weylherm/potential.hpp"

namespace weylherm {

enum class Model { von_neumann, semiclassical };
enum class TimeScheme { rk4, implicit_midpoint };

struct EvolutionConfig {
  Model model = Model::von_neumann;
  TimeScheme scheme = TimeScheme::rk4;
  double dt = 1e-3;
  double t_final = 0.0;
  double hbar = 0.1;            // ignored by the semiclassical model
  double safety_factor = 0.5;   // rk4: require dt <= safety_factor * stable_dt
  bool force_dt = false;        // override the rk4 stability check
  double midpoint_tol = 1e-12;  // relative residual of the midpoint solve
  int midpoint_max_iter = 600;
  int snapshot_every = 100;     // observer cadence in steps

  void validate() const;
};

// Mode-major coefficient field: R_k(x_j) for k = 0..N, each mode contiguous
// over the grid. Modes -1 and N+1 are identically zero (Galerkin closure).
struct HermiteState {
  GridSpec grid;
  int n_modes = 0;
  double time = 0.0;
  std::vector<cplx> data;

  static HermiteState zero(const GridSpec& grid, int n_modes);

  int nx() const { return grid.n_points; }
  std::span<cplx> mode(int k);
  std::span<const cplx> mode(int k) const;
};

class InitialData {
 public:
  // modes R_k = delta_{k,0} pi^{1/4} / (sqrt(2 pi) sigma_x) exp(-x^2 / (2 sigma_x^2))
  static InitialData coherent_state(double sigma_x);
  // f(x, y) projected onto the Hermite modes node by node (quad_order 0: N + 8)
  static InitialData custom(std::function<cplx(double, double)> f, int quad_order = 0);
  static InitialData coefficient_table(std::vector<FieldLine> modes);

  HermiteState realize(const GridSpec& grid, int n_modes) const;

 private:
  InitialData() = default;
  enum class Kind { coherent, custom, table } kind_ = Kind::coherent;
  double sigma_x_ = 0.6;
  std::function<cplx(double, double)> f_;
  int quad_order_ = 0;
  std::vector<FieldLine> table_;
};

// Spectral-radius estimate of the truncated generator and the rk4 bound
// dt_max = 2.8 / rho_hat.
double generator_radius_estimate(const GridSpec& grid, const PotentialModel& pot, int n_modes,
                                 const CouplingMatrix& coupling);
double stable_dt_estimate(const GridSpec& grid, const PotentialModel& pot, int n_modes,
                          double hbar, Model model);

// One truncated system bound to a grid, potential and mode cutoff; owns the
// assembled coupling, FFT plan and step workspaces.
class Propagator {
 public:
  Propagator(const GridSpec& grid, const PotentialModel& pot, int n_modes,
             const EvolutionConfig& cfg);

  const CouplingMatrix& coupling() const { return coupling_; }
  const EvolutionConfig& config() const { return cfg_; }
  double stable_dt() const;

  // du/dt of the truncated system (both models; the semiclassical one simply
  // has a zero coupling)
  void rhs(std::span<const cplx> u, std::span<cplx> du) const;

  void step(HermiteState& state, double dt);

  // fixed-step march to cfg.t_final; observer fires at step 0, every
  // snapshot_every steps and on the final step
  HermiteState run(const HermiteState& initial,
                   const std::function<void(const HermiteState&, long)>& observer = {},
                   std::ostream* log = nullptr);

  int last_midpoint_iterations() const { return last_midpoint_iters_; }

 private:
  void rk4_step(HermiteState& state, double dt);
  void midpoint_step(HermiteState& state, double dt);

  GridSpec grid_;
  PotentialModel pot_;
  int n_modes_;
  EvolutionConfig cfg_;
  std::vector<double> vprime_;
  CouplingMatrix coupling_;
  std::optional<FftPlan> plan_;
  mutable std::vector<cplx> deriv_buf_;
  std::vector<std::vector<cplx>> work_;
  int last_midpoint_iters_ = 0;
};

// Single-call forms assembled from the free-function building blocks; they
// are the slow reference path the Propagator is tested against.
std::vector<cplx> rhs_von_neumann(const HermiteState& state, const PotentialModel& pot,
                                  double hbar, const CouplingMatrix& coupling);
std::vector<cplx> rhs_semiclassical(const HermiteState& state, const PotentialModel& pot);

HermiteState run(const InitialData& init, const GridSpec& grid, const PotentialModel& pot,
                 int n_modes, const EvolutionConfig& cfg,
                 const std::function<void(const HermiteState&, long)>& observer = {},
                 std::ostream* log = nullptr);

// Snapshot container: "WEYLHERM1", N, Nx, x_min, x_max, t, hbar, model tag,
// then N+1 arrays of Nx little-endian re/im double pairs.
struct SnapshotInfo {
  double hbar = 0.0;
  Model model = Model::von_neumann;
};
void write_snapshot(const std::string& path, const HermiteState& state, double hbar,
                    Model model);
HermiteState read_snapshot(const std::string& path, SnapshotInfo* info = nullptr);

} // namespace weylherm
