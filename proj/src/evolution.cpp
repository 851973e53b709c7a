#include "weylherm/evolution.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "weylherm/basis.hpp"
#include "weylherm/simd/kernels.hpp"

namespace weylherm {

void EvolutionConfig::validate() const {
  if (t_final < 0.0) throw std::invalid_argument("EvolutionConfig: t_final must be >= 0");
  if (t_final > 0.0 && !(dt > 0.0)) throw std::invalid_argument("EvolutionConfig: dt must be > 0");
  if (model == Model::von_neumann) (void)HbarValue{hbar}; // range-checks hbar
  if (!(safety_factor > 0.0) || safety_factor > 1.0)
    throw std::invalid_argument("EvolutionConfig: safety_factor must lie in (0, 1]");
  if (!(midpoint_tol > 0.0)) throw std::invalid_argument("EvolutionConfig: midpoint_tol must be > 0");
  if (midpoint_max_iter < 1) throw std::invalid_argument("EvolutionConfig: midpoint_max_iter must be >= 1");
  if (snapshot_every < 1) throw std::invalid_argument("EvolutionConfig: snapshot_every must be >= 1");
}

HermiteState HermiteState::zero(const GridSpec& grid, int n_modes) {
  grid.validate();
  if (n_modes < 0) throw std::invalid_argument("HermiteState: n_modes must be >= 0");
  HermiteState s;
  s.grid = grid;
  s.n_modes = n_modes;
  s.data.assign(static_cast<std::size_t>(n_modes + 1) * grid.n_points, cplx(0.0));
  return s;
}

std::span<cplx> HermiteState::mode(int k) {
  return {data.data() + static_cast<std::size_t>(k) * nx(), static_cast<std::size_t>(nx())};
}

std::span<const cplx> HermiteState::mode(int k) const {
  return {data.data() + static_cast<std::size_t>(k) * nx(), static_cast<std::size_t>(nx())};
}

InitialData InitialData::coherent_state(double sigma_x) {
  if (!(sigma_x > 0.0)) throw std::invalid_argument("InitialData: sigma_x must be > 0");
  InitialData d;
  d.kind_ = Kind::coherent;
  d.sigma_x_ = sigma_x;
  return d;
}

InitialData InitialData::custom(std::function<cplx(double, double)> f, int quad_order) {
  if (!f) throw std::invalid_argument("InitialData: custom function must be callable");
  InitialData d;
  d.kind_ = Kind::custom;
  d.f_ = std::move(f);
  d.quad_order_ = quad_order;
  return d;
}

InitialData InitialData::coefficient_table(std::vector<FieldLine> modes) {
  if (modes.empty()) throw std::invalid_argument("InitialData: coefficient table must be non-empty");
  InitialData d;
  d.kind_ = Kind::table;
  d.table_ = std::move(modes);
  return d;
}

HermiteState InitialData::realize(const GridSpec& grid, int n_modes) const {
  HermiteState s = HermiteState::zero(grid, n_modes);
  switch (kind_) {
    case Kind::coherent: {
      const double amp = std::pow(kPi, 0.25) / (std::sqrt(2.0 * kPi) * sigma_x_);
      auto r0 = s.mode(0);
      for (int j = 0; j < grid.n_points; ++j) {
        const double x = grid.node(j);
        r0[j] = amp * std::exp(-0.5 * x * x / (sigma_x_ * sigma_x_));
      }
      return s;
    }
    case Kind::custom: {
      const int q = quad_order_ > 0 ? quad_order_ : n_modes + 8;
      for (int j = 0; j < grid.n_points; ++j) {
        const double x = grid.node(j);
        auto proj = project_function([&](double y) { return f_(x, y); }, n_modes, q);
        for (int k = 0; k <= n_modes; ++k) s.mode(k)[j] = proj.coeffs[k];
      }
      return s;
    }
    case Kind::table: {
      if (static_cast<int>(table_.size()) < n_modes + 1)
        throw std::invalid_argument("InitialData: coefficient table has fewer modes than requested");
      for (int k = 0; k <= n_modes; ++k) {
        if (table_[k].size() != static_cast<std::size_t>(grid.n_points))
          throw std::invalid_argument("InitialData: coefficient table does not match the grid");
        std::copy(table_[k].begin(), table_[k].end(), s.mode(k).begin());
      }
      return s;
    }
  }
  return s;
}

double generator_radius_estimate(const GridSpec& grid, const PotentialModel& pot, int n_modes,
                                 const CouplingMatrix& coupling) {
  double vmax = 0.0;
  for (int j = 0; j < grid.n_points; ++j)
    vmax = std::max(vmax, std::abs(pot.deriv(grid.node(j), 1)));
  const double ladder = std::sqrt(0.5 * (n_modes + 1)) *
                        (deriv_symbol_bound(grid.scheme) / grid.dx() + vmax);
  return ladder + coupling.max_row_abs_sum();
}

double stable_dt_estimate(const GridSpec& grid, const PotentialModel& pot, int n_modes,
                          double hbar, Model model) {
  const CouplingMatrix coupling = model == Model::von_neumann
                                      ? CouplingMatrix::assemble(pot, hbar, n_modes, grid)
                                      : CouplingMatrix::zero(n_modes, grid);
  // 2.8 ~ extent of the rk4 stability region along the imaginary axis
  return 2.8 / generator_radius_estimate(grid, pot, n_modes, coupling);
}

Propagator::Propagator(const GridSpec& grid, const PotentialModel& pot, int n_modes,
                       const EvolutionConfig& cfg)
    : grid_(grid), pot_(pot), n_modes_(n_modes), cfg_(cfg) {
  grid_.validate();
  cfg_.validate();
  if (n_modes < 0) throw std::invalid_argument("Propagator: n_modes must be >= 0");

  vprime_.resize(grid.n_points);
  for (int j = 0; j < grid.n_points; ++j) vprime_[j] = pot.deriv(grid.node(j), 1);

  coupling_ = cfg.model == Model::von_neumann
                  ? CouplingMatrix::assemble(pot, cfg.hbar, n_modes, grid)
                  : CouplingMatrix::zero(n_modes, grid);

  if (grid.scheme == DerivScheme::spectral_fourier) plan_.emplace(grid.n_points);
  deriv_buf_.resize(grid.n_points);
}

double Propagator::stable_dt() const {
  return 2.8 / generator_radius_estimate(grid_, pot_, n_modes_, coupling_);
}

void Propagator::rhs(std::span<const cplx> u, std::span<cplx> du) const {
  const std::size_t nx = static_cast<std::size_t>(grid_.n_points);
  const std::size_t total = nx * (n_modes_ + 1);
  if (u.size() != total || du.size() != total)
    throw std::invalid_argument("Propagator::rhs: field size mismatch");

  std::fill(du.begin(), du.end(), cplx(0.0));
  const auto& kernels = simd::active_kernels();
  const FftPlan* plan = plan_ ? &*plan_ : nullptr;

  for (int m = 0; m <= n_modes_; ++m) {
    const cplx* rm = u.data() + static_cast<std::size_t>(m) * nx;
    ddx_into(grid_, plan, rm, deriv_buf_.data());
    cplx* up = m + 1 <= n_modes_ ? du.data() + static_cast<std::size_t>(m + 1) * nx : nullptr;
    cplx* down = m >= 1 ? du.data() + static_cast<std::size_t>(m - 1) * nx : nullptr;
    kernels.ladder_accum(rm, deriv_buf_.data(), vprime_.data(), ladder_raise(m), ladder_lower(m),
                         up, down, nx);
  }
  coupling_.accumulate_neg_i(u, du);
}

void Propagator::rk4_step(HermiteState& state, double dt) {
  const std::size_t total = state.data.size();
  work_.resize(5);
  for (auto& w : work_) w.resize(total);
  auto& k1 = work_[0];
  auto& k2 = work_[1];
  auto& k3 = work_[2];
  auto& k4 = work_[3];
  auto& tmp = work_[4];

  const auto& kernels = simd::active_kernels();
  auto flat = [](std::vector<cplx>& v) { return reinterpret_cast<double*>(v.data()); };
  const std::size_t n2 = 2 * total;
  double* u = reinterpret_cast<double*>(state.data.data());

  rhs(state.data, k1);
  std::memcpy(flat(tmp), u, n2 * sizeof(double));
  kernels.axpy(0.5 * dt, flat(k1), flat(tmp), n2);
  rhs(tmp, k2);
  std::memcpy(flat(tmp), u, n2 * sizeof(double));
  kernels.axpy(0.5 * dt, flat(k2), flat(tmp), n2);
  rhs(tmp, k3);
  std::memcpy(flat(tmp), u, n2 * sizeof(double));
  kernels.axpy(dt, flat(k3), flat(tmp), n2);
  rhs(tmp, k4);

  kernels.axpy(dt / 6.0, flat(k1), u, n2);
  kernels.axpy(dt / 3.0, flat(k2), u, n2);
  kernels.axpy(dt / 3.0, flat(k3), u, n2);
  kernels.axpy(dt / 6.0, flat(k4), u, n2);
}

// (I - s L) u^{n+1} = (I + s L) u^n with s = dt/2. The generator is
// L = -i A with A self-adjoint, so multiplying by (I + s L) turns the system
// into the Hermitian positive-definite (I - s^2 L^2) u^{n+1} = (I + s L)^2 u^n,
// solved by plain CG. Singular values of (I - s L) are >= 1, hence the CG
// residual bounds the residual of the original system.
void Propagator::midpoint_step(HermiteState& state, double dt) {
  const std::size_t total = state.data.size();
  work_.resize(7);
  for (auto& w : work_) w.resize(total);
  auto& b = work_[0];
  auto& rhs2 = work_[1];
  auto& r = work_[2];
  auto& p = work_[3];
  auto& mp = work_[4];
  auto& lw = work_[5];
  auto& x = work_[6];

  const auto& kernels = simd::active_kernels();
  const double s = 0.5 * dt;
  const std::size_t n2 = 2 * total;
  auto flat = [](std::vector<cplx>& v) { return reinterpret_cast<double*>(v.data()); };

  auto apply_m = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
    // out = in - s^2 L(L in)
    rhs(in, lw);
    rhs(lw, out);
    for (std::size_t i = 0; i < total; ++i) out[i] = in[i] - s * s * out[i];
  };

  // b = (I + sL) u, rhs2 = (I + sL) b
  rhs(state.data, lw);
  std::memcpy(flat(b), reinterpret_cast<double*>(state.data.data()), n2 * sizeof(double));
  kernels.axpy(s, flat(lw), flat(b), n2);
  rhs(b, lw);
  std::memcpy(flat(rhs2), flat(b), n2 * sizeof(double));
  kernels.axpy(s, flat(lw), flat(rhs2), n2);

  const double b_norm = std::sqrt(kernels.norm_sq(b.data(), total));
  const double tol_abs = cfg_.midpoint_tol * std::max(b_norm, 1e-300);

  x = b; // good initial guess for moderate s
  apply_m(x, mp);
  for (std::size_t i = 0; i < total; ++i) r[i] = rhs2[i] - mp[i];
  p = r;
  double rs = kernels.norm_sq(r.data(), total);

  int iter = 0;
  while (std::sqrt(rs) > tol_abs) {
    if (++iter > cfg_.midpoint_max_iter)
      throw std::runtime_error("implicit midpoint solve did not converge: residual " +
                               std::to_string(std::sqrt(rs) / b_norm) + " after " +
                               std::to_string(cfg_.midpoint_max_iter) + " iterations");
    apply_m(p, mp);
    const double p_mp = kernels.dot_conj(p.data(), mp.data(), total).real();
    const double alpha = rs / p_mp;
    kernels.axpy(alpha, flat(p), flat(x), n2);
    if (iter % 32 == 0) {
      apply_m(x, mp);
      for (std::size_t i = 0; i < total; ++i) r[i] = rhs2[i] - mp[i];
    } else {
      kernels.axpy(-alpha, flat(mp), flat(r), n2);
    }
    const double rs_new = kernels.norm_sq(r.data(), total);
    const double beta = rs_new / rs;
    for (std::size_t i = 0; i < total; ++i) p[i] = r[i] + beta * p[i];
    rs = rs_new;
  }
  last_midpoint_iters_ = iter;
  state.data = x;
}

void Propagator::step(HermiteState& state, double dt) {
  if (state.n_modes != n_modes_ || !grids_compatible(state.grid, grid_))
    throw std::invalid_argument("Propagator::step: state does not match this propagator");
  if (!(dt > 0.0)) throw std::invalid_argument("Propagator::step: dt must be > 0");
  if (cfg_.scheme == TimeScheme::rk4)
    rk4_step(state, dt);
  else
    midpoint_step(state, dt);
}

HermiteState Propagator::run(const HermiteState& initial,
                             const std::function<void(const HermiteState&, long)>& observer,
                             std::ostream* log) {
  if (cfg_.scheme == TimeScheme::rk4 && cfg_.t_final > 0.0 && !cfg_.force_dt) {
    const double dt_max = cfg_.safety_factor * stable_dt();
    if (cfg_.dt > dt_max)
      throw std::invalid_argument("run: rk4 dt " + std::to_string(cfg_.dt) +
                                  " exceeds the stability bound " + std::to_string(dt_max) +
                                  " (safety_factor applied); reduce dt or set force_dt");
  }
  if (log && n_modes_ % 2 == 1)
    (*log) << "weylherm: warning: odd mode cutoff N = " << n_modes_
           << "; discrete trace conservation is only guaranteed for even N\n";

  HermiteState state = initial;
  const double t0 = state.time;
  const double span = cfg_.t_final - t0;
  if (span < 0.0) throw std::invalid_argument("run: t_final is before the state's time");

  long n_steps = 0;
  if (span > 0.0) n_steps = static_cast<long>(std::ceil(span / cfg_.dt - 1e-9));

  if (observer) observer(state, 0);
  const auto& kernels = simd::active_kernels();
  for (long n = 1; n <= n_steps; ++n) {
    const double target = n == n_steps ? cfg_.t_final : t0 + static_cast<double>(n) * cfg_.dt;
    step(state, target - state.time);
    state.time = target;
    if (!std::isfinite(kernels.norm_sq(state.data.data(), state.data.size())))
      throw std::runtime_error("run: state became non-finite at step " + std::to_string(n));
    if (observer && (n % cfg_.snapshot_every == 0 || n == n_steps)) observer(state, n);
  }
  return state;
}

HermiteState run(const InitialData& init, const GridSpec& grid, const PotentialModel& pot,
                 int n_modes, const EvolutionConfig& cfg,
                 const std::function<void(const HermiteState&, long)>& observer,
                 std::ostream* log) {
  Propagator prop(grid, pot, n_modes, cfg);
  return prop.run(init.realize(grid, n_modes), observer, log);
}

std::vector<cplx> rhs_von_neumann(const HermiteState& state, const PotentialModel& pot,
                                  double hbar, const CouplingMatrix& coupling) {
  if (coupling.n_modes() != state.n_modes || coupling.nx() != state.nx())
    throw std::invalid_argument("rhs_von_neumann: coupling does not match the state");
  (void)HbarValue{hbar};

  const int n = state.n_modes;
  const int nx = state.nx();
  std::vector<cplx> du(state.data.size(), cplx(0.0));

  // ladder transport: -i (sqrt(k/2) D R_{k-1} + sqrt((k+1)/2) D* R_{k+1})
  for (int k = 0; k <= n; ++k) {
    FieldLine acc(nx, cplx(0.0));
    if (k >= 1) {
      FieldLine d = apply_D(state.grid, pot, FieldLine(state.mode(k - 1).begin(), state.mode(k - 1).end()));
      for (int j = 0; j < nx; ++j) acc[j] += ladder_lower(k) * d[j];
    }
    if (k + 1 <= n) {
      FieldLine d = apply_Dstar(state.grid, pot, FieldLine(state.mode(k + 1).begin(), state.mode(k + 1).end()));
      for (int j = 0; j < nx; ++j) acc[j] += ladder_raise(k) * d[j];
    }
    for (int j = 0; j < nx; ++j)
      du[static_cast<std::size_t>(k) * nx + j] = cplx(acc[j].imag(), -acc[j].real());
  }

  // nonlocal term: -i sum_l E_{k,l} R_l, node by node
  std::vector<cplx> v(n + 1), ev(n + 1);
  for (int j = 0; j < nx; ++j) {
    for (int l = 0; l <= n; ++l) v[l] = state.mode(l)[j];
    coupling.apply_node(j, v, ev);
    for (int k = 0; k <= n; ++k)
      du[static_cast<std::size_t>(k) * nx + j] += cplx(ev[k].imag(), -ev[k].real());
  }
  return du;
}

std::vector<cplx> rhs_semiclassical(const HermiteState& state, const PotentialModel& pot) {
  const CouplingMatrix none = CouplingMatrix::zero(state.n_modes, state.grid);
  // hbar is irrelevant here; pass any admissible value
  return rhs_von_neumann(state, pot, 1.0, none);
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot files are little-endian; big-endian hosts are unsupported");

constexpr char kMagic[9] = {'W', 'E', 'Y', 'L', 'H', 'E', 'R', 'M', '1'};

template <typename T>
void put(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

} // namespace

void write_snapshot(const std::string& path, const HermiteState& state, double hbar,
                    Model model) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("write_snapshot: cannot open " + path);
  os.write(kMagic, sizeof(kMagic));
  put<std::int32_t>(os, state.n_modes);
  put<std::int32_t>(os, state.nx());
  put<double>(os, state.grid.x_min);
  put<double>(os, state.grid.x_max);
  put<double>(os, state.time);
  put<double>(os, hbar);
  put<std::int32_t>(os, model == Model::von_neumann ? 0 : 1);
  os.write(reinterpret_cast<const char*>(state.data.data()),
           static_cast<std::streamsize>(state.data.size() * sizeof(cplx)));
  if (!os) throw std::runtime_error("write_snapshot: write failed for " + path);
}

HermiteState read_snapshot(const std::string& path, SnapshotInfo* info) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_snapshot: cannot open " + path);
  char magic[9];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("read_snapshot: bad magic in " + path);

  const auto n_modes = get<std::int32_t>(is);
  const auto nx = get<std::int32_t>(is);
  GridSpec grid;
  grid.x_min = get<double>(is);
  grid.x_max = get<double>(is);
  grid.n_points = nx;
  const double t = get<double>(is);
  const double hbar = get<double>(is);
  const auto tag = get<std::int32_t>(is);
  if (!is || n_modes < 0 || nx < 8 || (tag != 0 && tag != 1))
    throw std::runtime_error("read_snapshot: corrupt header in " + path);

  HermiteState state = HermiteState::zero(grid, n_modes);
  state.time = t;
  is.read(reinterpret_cast<char*>(state.data.data()),
          static_cast<std::streamsize>(state.data.size() * sizeof(cplx)));
  if (!is) throw std::runtime_error("read_snapshot: truncated payload in " + path);
  if (info) {
    info->hbar = hbar;
    info->model = tag == 0 ? Model::von_neumann : Model::semiclassical;
  }
  return state;
}

} // namespace weylherm
