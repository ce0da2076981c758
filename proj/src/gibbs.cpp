// SPDX-License-Identifier: Apache-2.0
#include "ripley/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "ripley/error.hpp"

namespace ripley {

// ---------------------------------------------------------------------------
// Energy families

PairPotential PairPotential::strauss(double gamma, double radius) {
  require(gamma >= 0.0 && gamma <= 1.0, "Strauss gamma must lie in [0, 1]");
  require(radius > 0.0, "Strauss radius must be positive");
  if (gamma == 0.0) return {radius, {}, {}};
  return {0.0, {radius}, {-std::log(gamma)}};
}

PairPotential PairPotential::hardcore_strauss(double hardcore, double gamma, double radius) {
  require(gamma > 0.0 && gamma <= 1.0, "hard-core Strauss gamma must lie in (0, 1]");
  require(hardcore > 0.0 && hardcore < radius, "need 0 < hard core < interaction radius");
  return {hardcore, {radius}, {-std::log(gamma)}};
}

double PairPotential::operator()(double t) const {
  if (hardcore_radius > 0.0 && t <= hardcore_radius) return std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < breaks.size(); ++i)
    if (t <= breaks[i]) return values[i];
  return 0.0;
}

double PairPotential::range() const { return breaks.empty() ? hardcore_radius : breaks.back(); }

void PairPotential::validate() const {
  require(breaks.size() == values.size(), "pair potential needs one value per break");
  require(hardcore_radius >= 0.0 && std::isfinite(hardcore_radius), "hard-core radius must be >= 0");
  double prev = hardcore_radius;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    require(std::isfinite(breaks[i]) && breaks[i] > prev,
            "pair potential breaks must increase beyond the hard core");
    require(std::isfinite(values[i]) && values[i] >= 0.0,
            "pair potential values must be finite and nonnegative");
    prev = breaks[i];
  }
  require(range() > 0.0, "pair potential must have positive range");
}

namespace {

double family_range(const GibbsFamily& family) {
  return std::visit([](const auto& f) { return f.range(); }, family);
}

void validate_family(const GibbsFamily& family) {
  std::visit(
      [](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PairPotential>) {
          f.validate();
        } else if constexpr (std::is_same_v<T, AreaInteraction>) {
          require(std::isfinite(f.disk_radius) && f.disk_radius > 0.0, "disk radius must be positive");
          require(f.resolution >= 1, "area sub-grid resolution must be >= 1");
        } else {
          require(std::isfinite(f.ball_radius) && f.ball_radius > 0.0, "ball radius must be positive");
          require(f.k > 2, "hard k-ball model needs k > 2");
        }
      },
      family);
}

}  // namespace

GibbsModel::GibbsModel(GibbsFamily family, double activity, double inverse_temperature)
    : family_(std::move(family)), activity_(activity), beta_(inverse_temperature), range_(0.0) {
  validate_family(family_);
  require(std::isfinite(activity_) && activity_ > 0.0, "Gibbs activity must be positive");
  require(std::isfinite(beta_) && beta_ >= 0.0, "inverse temperature must be >= 0");
  range_ = family_range(family_);
  const double lambda = branching_rate();
  if (!(lambda < 1.0)) {
    std::ostringstream msg;
    msg << "Gibbs model is not admissible: tau*kappa_2*range^2 = " << lambda << " >= 1";
    throw InvalidArgument(msg.str());
  }
}

double GibbsModel::branching_rate() const noexcept {
  return activity_ * std::numbers::pi * range_ * range_;
}

std::string GibbsModel::describe() const {
  std::ostringstream out;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PairPotential>) {
          out << "pair(hardcore=" << f.hardcore_radius;
          for (std::size_t i = 0; i < f.breaks.size(); ++i)
            out << ",phi(.." << f.breaks[i] << "]=" << f.values[i];
          out << ")";
        } else if constexpr (std::is_same_v<T, AreaInteraction>) {
          out << "area(disk_radius=" << f.disk_radius << ",resolution=" << f.resolution << ")";
        } else {
          out << "hardkball(R=" << f.ball_radius << ",k=" << f.k << ")";
        }
      },
      family_);
  out << " tau=" << activity_ << " beta=" << beta_;
  return out.str();
}

// ---------------------------------------------------------------------------
// Energy increments

namespace {

double uncovered_disk_area(const Vec2& x, std::span<const Vec2> config, const AreaInteraction& f) {
  const double r = f.disk_radius;
  std::vector<Vec2> near;
  for (const Vec2& y : config)
    if (dist(x, y) < 2.0 * r) near.push_back(y);
  if (near.empty()) return std::numbers::pi * r * r;
  const int m = f.resolution;
  const double step = 2.0 * r / m;
  std::size_t inside = 0, uncovered = 0;
  for (int j = 0; j < m; ++j) {
    const double py = x[1] - r + (j + 0.5) * step;
    for (int i = 0; i < m; ++i) {
      const double px = x[0] - r + (i + 0.5) * step;
      const Vec2 p{px, py};
      if (dist(p, x) > r) continue;
      ++inside;
      const bool covered =
          std::any_of(near.begin(), near.end(), [&](const Vec2& y) { return dist(p, y) <= r; });
      if (!covered) ++uncovered;
    }
  }
  return std::numbers::pi * r * r * static_cast<double>(uncovered) / static_cast<double>(inside);
}

// Depth-first search over (k-1)-subsets of `near` whose members are pairwise
// within 2R, testing the minimum enclosing circle of subset ∪ {x}.
bool fits_k_ball(std::vector<Vec2>& chosen, std::span<const Vec2> near, std::size_t start,
                 int remaining, double R) {
  if (remaining == 0) return min_enclosing_circle(chosen).radius <= R * (1.0 + 1e-12);
  for (std::size_t i = start; i + static_cast<std::size_t>(remaining) <= near.size(); ++i) {
    const bool compatible = std::all_of(chosen.begin(), chosen.end(),
                                        [&](const Vec2& c) { return dist(c, near[i]) <= 2.0 * R; });
    if (!compatible) continue;
    chosen.push_back(near[i]);
    const bool found = fits_k_ball(chosen, near, i + 1, remaining - 1, R);
    chosen.pop_back();
    if (found) return true;
  }
  return false;
}

double hard_k_ball_increment(const Vec2& x, std::span<const Vec2> config, const HardKBall& f) {
  const double R = f.ball_radius;
  std::vector<Vec2> near;
  for (const Vec2& y : config)
    if (dist(x, y) <= 2.0 * R) near.push_back(y);
  if (near.size() + 1 < static_cast<std::size_t>(f.k)) return 0.0;
  std::vector<Vec2> chosen{x};
  return fits_k_ball(chosen, near, 0, f.k - 1, R) ? std::numeric_limits<double>::infinity() : 0.0;
}

}  // namespace

double delta_psi(const Vec2& x, std::span<const Vec2> config, const GibbsModel& model) {
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PairPotential>) {
          double sum = 0.0;
          const double range = f.range();
          for (const Vec2& y : config) {
            const double t = dist(x, y);
            if (t > range) continue;
            sum += f(t);
            if (std::isinf(sum)) return sum;
          }
          return sum;
        } else if constexpr (std::is_same_v<T, AreaInteraction>) {
          return uncovered_disk_area(x, config, f);
        } else {
          return hard_k_ball_increment(x, config, f);
        }
      },
      model.family());
}

double delta_psi(std::span<const double> x, const PointPattern& config, const GibbsModel& model) {
  require(config.dimension() == 2 && x.size() == 2, "Gibbs models are planar");
  std::vector<Vec2> pts(config.size());
  for (std::size_t i = 0; i < config.size(); ++i) pts[i] = {config[i][0], config[i][1]};
  return delta_psi(Vec2{x[0], x[1]}, pts, model);
}

double default_padding(const CubeWindow& window, const GibbsModel& model, double tolerance) {
  require(tolerance > 0.0, "padding tolerance must be positive");
  const double lambda = model.branching_rate();
  double bound = window.volume() * model.activity();
  int k = 0;
  while (bound >= tolerance && k < 100000) {
    bound *= lambda;
    ++k;
  }
  return 2.0 * k * model.range();
}

// ---------------------------------------------------------------------------
// Free birth-death process, generated lazily per spatial cell and backwards
// in time.

namespace {

constexpr std::uint32_t kNoEvent = std::numeric_limits<std::uint32_t>::max();

struct Event {
  Vec2 pos{};
  double birth = 0.0;
  double death = std::numeric_limits<double>::infinity();
  double accept_u = 0.0;
  bool birth_known = false;
  bool accepted = false;
  std::int32_t generation = -1;
  std::uint32_t anc_begin = 0;
  std::uint32_t anc_count = 0;
};

struct Box {
  double x0, y0, x1, y1;
};

class FreeProcess {
 public:
  FreeProcess(double tau, double cell, std::optional<Box> domain, RngSeed seed,
              std::size_t budget, double chunk)
      : tau_(tau), cell_(cell), domain_(domain), seed_(seed), budget_(budget), chunk_(chunk) {
    if (domain_) {
      origin_ = {domain_->x0, domain_->y0};
      nx_ = static_cast<long long>(std::ceil((domain_->x1 - domain_->x0) / cell_));
      ny_ = static_cast<long long>(std::ceil((domain_->y1 - domain_->y0) / cell_));
    }
  }

  std::vector<Event> events;

  long long index_x(double x) const { return static_cast<long long>(std::floor((x - origin_[0]) / cell_)); }
  long long index_y(double y) const { return static_cast<long long>(std::floor((y - origin_[1]) / cell_)); }

  bool in_domain(long long ix, long long iy) const {
    if (!domain_) return true;
    return ix >= 0 && iy >= 0 && ix < nx_ && iy < ny_;
  }

  /// Event ids initially alive at time 0 in cell (ix, iy).
  const std::vector<std::uint32_t>& initial(long long ix, long long iy) { return cell(ix, iy).initial; }

  void ensure_birth_known(std::uint32_t id) {
    if (events[id].birth_known) return;
    const Vec2 p = events[id].pos;
    Cell& c = cell(clamp_x(index_x(p[0])), clamp_y(index_y(p[1])));
    while (!events[id].birth_known) extend(c, c.horizon - chunk_);
  }

  /// Ids of events alive just before time b within `radius` of p.
  void ancestors(const Vec2& p, double b, double radius, std::uint32_t self,
                 std::vector<std::uint32_t>& out) {
    out.clear();
    const auto reach = static_cast<long long>(std::ceil(radius / cell_));
    const long long cx = index_x(p[0]);
    const long long cy = index_y(p[1]);
    for (long long iy = cy - reach; iy <= cy + reach; ++iy) {
      for (long long ix = cx - reach; ix <= cx + reach; ++ix) {
        if (!in_domain(ix, iy)) continue;
        Cell& c = cell(ix, iy);
        extend(c, b);
        for (std::uint32_t id : c.ids) {
          if (id == self) continue;
          const Event& e = events[id];
          if (e.death <= b) continue;
          if (e.birth_known && e.birth >= b) continue;
          if (dist(e.pos, p) <= radius) out.push_back(id);
        }
      }
    }
  }

 private:
  struct Cell {
    Box box{};
    double area = 0.0;
    double horizon = 0.0;
    SplitMix64 gen{0};
    std::vector<std::uint32_t> ids;
    std::vector<std::uint32_t> unknown;
    std::vector<std::uint32_t> initial;
  };

  long long clamp_x(long long ix) const { return domain_ ? std::clamp(ix, 0LL, nx_ - 1) : ix; }
  long long clamp_y(long long iy) const { return domain_ ? std::clamp(iy, 0LL, ny_ - 1) : iy; }

  static std::uint64_t key(long long ix, long long iy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
           static_cast<std::uint32_t>(iy);
  }

  Cell& cell(long long ix, long long iy) {
    auto [it, inserted] = cells_.try_emplace(key(ix, iy));
    Cell& c = it->second;
    if (!inserted) return c;
    c.box = {origin_[0] + static_cast<double>(ix) * cell_, origin_[1] + static_cast<double>(iy) * cell_,
             origin_[0] + static_cast<double>(ix + 1) * cell_,
             origin_[1] + static_cast<double>(iy + 1) * cell_};
    if (domain_) {
      c.box.x1 = std::min(c.box.x1, domain_->x1);
      c.box.y1 = std::min(c.box.y1, domain_->y1);
    }
    c.area = (c.box.x1 - c.box.x0) * (c.box.y1 - c.box.y0);
    c.gen = SplitMix64(hash_values({seed_.seed, seed_.stream, static_cast<std::uint64_t>(ix),
                                    static_cast<std::uint64_t>(iy)}));
    // The stationary free process has Poisson(tau·area) points alive at 0.
    std::poisson_distribution<long long> count(tau_ * c.area);
    const long long n0 = count(c.gen);
    for (long long k = 0; k < n0; ++k) {
      const std::uint32_t id = new_event(c, std::numeric_limits<double>::infinity());
      c.initial.push_back(id);
    }
    return c;
  }

  std::uint32_t new_event(Cell& c, double death) {
    if (events.size() >= budget_)
      throw RuntimeError("perfect sampler exceeded its event budget of " + std::to_string(budget_) +
                         " birth-death events");
    Event e;
    e.pos = {c.box.x0 + (c.box.x1 - c.box.x0) * uniform01(c.gen),
             c.box.y0 + (c.box.y1 - c.box.y0) * uniform01(c.gen)};
    e.death = death;
    e.accept_u = uniform01(c.gen);
    const auto id = static_cast<std::uint32_t>(events.size());
    events.push_back(e);
    c.ids.push_back(id);
    c.unknown.push_back(id);
    return id;
  }

  // Run the time-reversed process of cell c back to `target`. Backwards in
  // time, deaths arrive at rate tau·area and each living point of unknown
  // birth reaches its birth at rate 1.
  void extend(Cell& c, double target) {
    const double arrival = tau_ * c.area;
    while (c.horizon > target) {
      const double rate = arrival + static_cast<double>(c.unknown.size());
      const double t = c.horizon + std::log1p(-uniform01(c.gen)) / rate;
      if (t <= target) {
        c.horizon = target;
        break;
      }
      c.horizon = t;
      const double pick = uniform01(c.gen) * rate;
      if (pick < arrival || c.unknown.empty()) {
        new_event(c, t);
      } else {
        const auto slot = std::min(static_cast<std::size_t>(pick - arrival), c.unknown.size() - 1);
        Event& e = events[c.unknown[slot]];
        e.birth = t;
        e.birth_known = true;
        c.unknown[slot] = c.unknown.back();
        c.unknown.pop_back();
      }
    }
  }

  double tau_;
  double cell_;
  std::optional<Box> domain_;
  RngSeed seed_;
  std::size_t budget_;
  double chunk_;
  Vec2 origin_{0.0, 0.0};
  long long nx_ = 0, ny_ = 0;
  std::unordered_map<std::uint64_t, Cell> cells_;
};

// Breadth-first closure of the ancestor relation from `roots`; returns the
// visit order and fills the flat ancestor store.
std::vector<std::uint32_t> trace_clans(FreeProcess& proc, std::vector<std::uint32_t> roots,
                                       double range, std::vector<std::uint32_t>& store) {
  std::vector<std::uint32_t> queue = std::move(roots);
  for (std::uint32_t id : queue) proc.events[id].generation = 0;
  std::vector<std::uint32_t> found;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const std::uint32_t id = queue[q];
    proc.ensure_birth_known(id);
    const Vec2 pos = proc.events[id].pos;
    const double birth = proc.events[id].birth;
    proc.ancestors(pos, birth, range, id, found);
    Event& e = proc.events[id];
    e.anc_begin = static_cast<std::uint32_t>(store.size());
    e.anc_count = static_cast<std::uint32_t>(found.size());
    store.insert(store.end(), found.begin(), found.end());
    for (std::uint32_t a : found) {
      Event& anc = proc.events[a];
      if (anc.generation < 0) {
        anc.generation = e.generation + 1;
        queue.push_back(a);
      }
    }
  }
  return queue;
}

double acceptance_probability(const Vec2& x, std::span<const Vec2> alive, const GibbsModel& model) {
  if (model.inverse_temperature() == 0.0) return 1.0;
  const double delta = delta_psi(x, alive, model);
  if (std::isinf(delta)) return 0.0;
  return std::exp(-model.inverse_temperature() * delta);
}

void thin_forward(FreeProcess& proc, std::vector<std::uint32_t> clan_union,
                  const std::vector<std::uint32_t>& store, const GibbsModel& model) {
  auto& ev = proc.events;
  std::sort(clan_union.begin(), clan_union.end(),
            [&](std::uint32_t a, std::uint32_t b) { return ev[a].birth < ev[b].birth; });
  std::vector<Vec2> alive;
  for (std::uint32_t id : clan_union) {
    Event& e = ev[id];
    alive.clear();
    for (std::uint32_t k = 0; k < e.anc_count; ++k) {
      const Event& a = ev[store[e.anc_begin + k]];
      if (a.accepted) alive.push_back(a.pos);
    }
    e.accepted = e.accept_u < acceptance_probability(e.pos, alive, model);
  }
}

struct Run {
  FreeProcess proc;
  std::vector<std::uint32_t> targets;
  std::vector<std::uint32_t> store;
  std::size_t resolved = 0;
};

Run run_perfect(const CubeWindow& window, const GibbsModel& model, RngSeed seed,
                const PerfectSamplerOptions& options) {
  require(window.dimension() == 2, "Gibbs perfect sampler requires d = 2");
  require(options.time_chunk > 0.0, "time chunk must be positive");
  const double pad = options.padding ? *options.padding : default_padding(window, model);
  require(pad >= 0.0 && std::isfinite(pad), "padding must be >= 0");
  const double h = window.half_side();
  const Box domain{-h - pad, -h - pad, h + pad, h + pad};
  Run run{FreeProcess(model.activity(), model.range(), domain, seed, options.event_budget,
                      options.time_chunk),
          {}, {}, 0};
  FreeProcess& proc = run.proc;

  const long long ix0 = proc.index_x(-h), ix1 = proc.index_x(h);
  const long long iy0 = proc.index_y(-h), iy1 = proc.index_y(h);
  for (long long iy = iy0; iy <= iy1; ++iy)
    for (long long ix = ix0; ix <= ix1; ++ix) {
      if (!proc.in_domain(ix, iy)) continue;
      for (std::uint32_t id : proc.initial(ix, iy)) {
        const Vec2& p = proc.events[id].pos;
        if (std::abs(p[0]) <= h && std::abs(p[1]) <= h) run.targets.push_back(id);
      }
    }
  auto clan_union = trace_clans(proc, run.targets, model.range(), run.store);
  run.resolved = clan_union.size();
  thin_forward(proc, std::move(clan_union), run.store, model);
  return run;
}

// Stats of the clan rooted at `root`, using stamp to mark visits.
ClanStats clan_of(const std::vector<Event>& ev, const std::vector<std::uint32_t>& store,
                  std::uint32_t root, std::vector<std::uint32_t>& stamp, std::uint32_t mark,
                  double range, std::optional<Vec2> extra_root = std::nullopt,
                  std::span<const std::uint32_t> extra_children = {}) {
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::size_t>> members;  // id, depth
  std::vector<Vec2> pts;
  std::size_t depth_max = 0;
  if (extra_root) {
    pts.push_back(*extra_root);
    for (std::uint32_t c : extra_children)
      if (stamp[c] != mark) {
        stamp[c] = mark;
        members.push_back({c, 1});
      }
  } else {
    stamp[root] = mark;
    members.push_back({root, 0});
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto [id, depth] = members[i];
    depth_max = std::max(depth_max, depth);
    pts.push_back(ev[id].pos);
    const Event& e = ev[id];
    for (std::uint32_t k = 0; k < e.anc_count; ++k) {
      const std::uint32_t a = store[e.anc_begin + k];
      if (stamp[a] == mark) continue;
      stamp[a] = mark;
      members.push_back({a, depth + 1});
    }
  }
  double diam = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) diam = std::max(diam, dist(pts[i], pts[j]));
  return {pts.size(), diam + 2.0 * range, depth_max};
}

}  // namespace

GibbsSample sample_gibbs_perfect(const CubeWindow& window, const GibbsModel& model, RngSeed seed,
                                 const PerfectSamplerOptions& options) {
  Run run = run_perfect(window, model, seed, options);
  const auto& ev = run.proc.events;
  std::vector<double> coords;
  for (std::uint32_t id : run.targets)
    if (ev[id].accepted) {
      coords.push_back(ev[id].pos[0]);
      coords.push_back(ev[id].pos[1]);
    }
  ClanSummary summary;
  summary.clans = run.targets.size();
  summary.resolved_events = run.resolved;
  summary.generated_events = ev.size();
  if (!run.targets.empty()) {
    std::vector<std::uint32_t> stamp(ev.size(), 0);
    std::uint32_t mark = 0;
    double total = 0.0;
    for (std::uint32_t id : run.targets) {
      const ClanStats s = clan_of(ev, run.store, id, stamp, ++mark, model.range());
      total += static_cast<double>(s.clan_size);
      summary.max_size = std::max(summary.max_size, s.clan_size);
      summary.max_diameter = std::max(summary.max_diameter, s.clan_diameter);
      summary.max_generations = std::max(summary.max_generations, s.generations);
    }
    summary.mean_size = total / static_cast<double>(run.targets.size());
  }
  return {PointPattern(window, std::move(coords)), summary};
}

std::vector<ClanStats> sample_clan_stats(const CubeWindow& window, const GibbsModel& model,
                                         RngSeed seed, const PerfectSamplerOptions& options) {
  Run run = run_perfect(window, model, seed, options);
  const auto& ev = run.proc.events;
  std::vector<std::uint32_t> stamp(ev.size(), 0);
  std::vector<ClanStats> out;
  out.reserve(run.targets.size());
  std::uint32_t mark = 0;
  for (std::uint32_t id : run.targets) out.push_back(clan_of(ev, run.store, id, stamp, ++mark, model.range()));
  return out;
}

std::vector<ClanTailPoint> clan_tail_probe(const GibbsModel& model, std::size_t replications,
                                           RngSeed seed, int k_max) {
  require(replications >= 1, "clan probe needs at least one replication");
  require(k_max >= 1, "k_max must be >= 1");
  const double r = model.range();
  std::vector<std::size_t> exceed(static_cast<std::size_t>(k_max) + 1, 0);
  for (std::size_t rep = 0; rep < replications; ++rep) {
    FreeProcess proc(model.activity(), r, std::nullopt, seed.substream(rep), 100'000'000, 1.0);
    std::vector<std::uint32_t> roots;
    const Vec2 origin{0.0, 0.0};
    proc.ancestors(origin, 0.0, r, kNoEvent, roots);
    std::vector<std::uint32_t> store;
    trace_clans(proc, roots, r, store);
    std::vector<std::uint32_t> stamp(proc.events.size(), 0);
    const ClanStats s = clan_of(proc.events, store, kNoEvent, stamp, 1, r, origin, roots);
    for (int k = 1; k <= k_max; ++k)
      if (s.clan_diameter > 2.0 * k * r) ++exceed[static_cast<std::size_t>(k)];
  }
  std::vector<ClanTailPoint> out;
  const double lambda = model.branching_rate();
  const auto reps = static_cast<double>(replications);
  for (int k = 1; k <= k_max; ++k) {
    const double p = static_cast<double>(exceed[static_cast<std::size_t>(k)]) / reps;
    out.push_back({k, p, std::sqrt(p * (1.0 - p) / reps), std::pow(lambda, k)});
  }
  return out;
}

}  // namespace ripley
