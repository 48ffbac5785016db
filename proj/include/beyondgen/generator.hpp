#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <thread>
#include <unordered_set>

#include "beyondgen/constraints.hpp"
#include "beyondgen/isomorphism.hpp"
#include "beyondgen/pathways.hpp"

namespace beyondgen {

// Vertex-insertion order from a base case (K_3 or K_{2,2}) to the target.
// Bipartite schedules zig-zag near the square and then extend the larger
// side: K_{2,2}, K_{2,3}, K_{3,3}, K_{3,4}, K_{4,4}, K_{4,5}, K_{5,5}, ...
struct InsertionSchedule {
  std::vector<GraphSpec> steps;

  static InsertionSchedule default_for(const GraphSpec& target) {
    InsertionSchedule s;
    if (target.is_complete()) {
      for (int n = 3; n <= target.a; ++n) s.steps.push_back(GraphSpec::complete(n));
    } else {
      int x = 2, y = 2;
      s.steps.push_back(GraphSpec::bipartite(2, 2));
      while (x != target.a || y != target.b) {
        if (y < target.b && (y <= x || x == target.a))
          ++y;
        else
          ++x;
        GraphSpec g;
        g.kind = GraphKind::CompleteBipartite;
        g.a = x;
        g.b = y;
        s.steps.push_back(g);
      }
    }
    s.validate();
    return s;
  }

  // Colon-separated graph specs, e.g. "K2,2:K2,3:K3,3".
  static InsertionSchedule parse(const std::string& text) {
    InsertionSchedule s;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t next = text.find(':', pos);
      std::string tok = text.substr(pos, next == std::string::npos ? next : next - pos);
      if (tok.empty()) throw ArgumentError("empty schedule entry");
      s.steps.push_back(GraphSpec::parse(tok));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    s.validate();
    return s;
  }

  void validate() const {
    if (steps.empty()) throw ArgumentError("empty schedule");
    const GraphSpec& base = steps.front();
    bool base_ok = base.is_complete() ? base.a == 3 : (base.a == 2 && base.b == 2);
    if (!base_ok) throw ArgumentError("schedule must start at K3 or K2,2");
    for (std::size_t i = 1; i < steps.size(); ++i) {
      if (steps[i].kind != base.kind) throw ArgumentError("schedule mixes graph kinds");
      int da = steps[i].a - steps[i - 1].a;
      int db = steps[i].b - steps[i - 1].b;
      if (da + db != 1 || da < 0 || db < 0)
        throw ArgumentError("schedule steps must add one vertex each");
    }
  }

  const GraphSpec& target() const { return steps.back(); }

  // Identity of the insertion history up to and including step `upto`.
  std::string fingerprint(std::size_t upto) const {
    std::string fp;
    for (std::size_t i = 0; i <= upto && i < steps.size(); ++i) {
      if (i) fp += '>';
      fp += steps[i].to_string();
    }
    return fp;
  }
};

struct DrawingSetStats {
  std::uint64_t raw_generated = 0;
  std::uint64_t non_iso = 0;
  double wall_seconds = 0;
};

// Deduplicated drawings for one (class, graph) pair.
struct DrawingSet {
  GraphSpec spec;
  ClassSpec cls;
  std::vector<Drawing> drawings;
  DrawingSetStats stats;
};

namespace detail {

inline Drawing make_triangle() {
  std::vector<Vertex> v(3);
  for (int i = 0; i < 3; ++i) v[i] = Vertex{VertexKind::Real, 0, static_cast<std::int16_t>(i)};
  std::vector<std::vector<VertexId>> rot = {{1, 2}, {0, 2}, {0, 1}};
  std::vector<OriginalEdge> e(3);
  e[0].u = 0, e[0].w = 1;
  e[1].u = 0, e[1].w = 2;
  e[2].u = 1, e[2].w = 2;
  return Drawing::from_rotations(GraphSpec::complete(3), v, rot, e);
}

inline Drawing make_plane_quad() {
  std::vector<Vertex> v(4);
  v[0] = Vertex{VertexKind::Real, 0, 0};
  v[1] = Vertex{VertexKind::Real, 0, 1};
  v[2] = Vertex{VertexKind::Real, 1, 0};
  v[3] = Vertex{VertexKind::Real, 1, 1};
  // The 4-cycle 0-2-1-3 drawn without crossings.
  std::vector<std::vector<VertexId>> rot = {{2, 3}, {2, 3}, {0, 1}, {0, 1}};
  std::vector<OriginalEdge> e(4);
  e[0].u = 0, e[0].w = 2;
  e[1].u = 0, e[1].w = 3;
  e[2].u = 1, e[2].w = 2;
  e[3].u = 1, e[3].w = 3;
  return Drawing::from_rotations(GraphSpec::bipartite(2, 2), v, rot, e);
}

inline Drawing make_crossed_quad() {
  std::vector<Vertex> v(5);
  v[0] = Vertex{VertexKind::Real, 0, 0};
  v[1] = Vertex{VertexKind::Real, 0, 1};
  v[2] = Vertex{VertexKind::Real, 1, 0};
  v[3] = Vertex{VertexKind::Real, 1, 1};
  v[4] = Vertex{VertexKind::Crossing};
  // Edges (0,2) and (1,3) cross at vertex 4; (0,3) and (1,2) stay free.
  std::vector<std::vector<VertexId>> rot = {{3, 4}, {2, 4}, {1, 4}, {0, 4}, {1, 0, 3, 2}};
  std::vector<OriginalEdge> e(4);
  e[0].u = 0, e[0].w = 2, e[0].crossings = {4};
  e[1].u = 0, e[1].w = 3;
  e[2].u = 1, e[2].w = 2;
  e[3].u = 1, e[3].w = 3, e[3].crossings = {4};
  return Drawing::from_rotations(GraphSpec::bipartite(2, 2), v, rot, e);
}

inline std::vector<VertexId> real_vertices_of_side(const Drawing& d, int side) {
  std::vector<std::pair<int, VertexId>> found;
  for (VertexId v = 0; v < static_cast<VertexId>(d.vertices.size()); ++v)
    if (d.vertices[v].kind == VertexKind::Real && d.vertices[v].side == side)
      found.emplace_back(d.vertices[v].index, v);
  std::sort(found.begin(), found.end());
  std::vector<VertexId> out;
  for (auto& [idx, v] : found) out.push_back(v);
  return out;
}

}  // namespace detail

// Drawings of the recursion base: the planar K_3, or for K_{2,2} the planar
// 4-cycle plus the drawing with its two independent edges crossing.
inline DrawingSet base_set(const GraphSpec& spec, const ClassSpec& cls) {
  std::vector<Drawing> all;
  if (spec.is_complete() && spec.a == 3) {
    all.push_back(detail::make_triangle());
  } else if (!spec.is_complete() && spec.a == 2 && spec.b == 2) {
    all.push_back(detail::make_plane_quad());
    all.push_back(detail::make_crossed_quad());
  } else {
    throw ArgumentError("base case must be K3 or K2,2, got " + spec.to_string());
  }
  DrawingSet set;
  set.spec = spec;
  set.cls = cls;
  set.stats.raw_generated = all.size();
  std::vector<Drawing> valid;
  for (Drawing& d : all)
    if (drawing_satisfies(cls, d)) valid.push_back(normalized(d));
  set.drawings = dedupe(valid, cls.iso_mode);
  set.stats.non_iso = set.drawings.size();
  return set;
}

// Visits every drawing obtained by inserting one new vertex labeled
// (side, index) with the given neighbor list, routing its edges in all valid
// ways under `cls`. The base drawing's graph spec must already cover the new
// label. fn may return false to stop; the function then returns false.
template <typename Fn>
bool visit_vertex_insertions(const Drawing& base, int side, int index,
                             const std::vector<VertexId>& neighbors, const ClassSpec& cls, Fn&& fn,
                             std::mt19937_64* rng = nullptr) {
  if (neighbors.empty()) throw ArgumentError("new vertex needs at least one neighbor");
  const VertexId new_id = static_cast<VertexId>(base.vertices.size());

  auto descend = [&](auto&& self, Drawing&& d, std::size_t j) -> bool {
    if (j == neighbors.size()) return fn(std::move(d));
    // The new vertex keeps its id only until crossings are appended by later
    // edges; resolve it by label instead.
    VertexId v = new_id;
    if (d.vertices[v].kind != VertexKind::Real || d.vertices[v].side != side ||
        d.vertices[v].index != index) {
      v = kInvalidId;
      for (VertexId cand = 0; cand < static_cast<VertexId>(d.vertices.size()); ++cand)
        if (d.vertices[cand].kind == VertexKind::Real && d.vertices[cand].side == side &&
            d.vertices[cand].index == index) {
          v = cand;
          break;
        }
    }
    VertexId target = neighbors[j];
    return visit_pathways(
        d, v, target, cls,
        [&](const CurveBuilder& cb, CornerId attach) {
          return self(self, cb.finish_at_corner(attach), j + 1);
        },
        rng);
  };

  return visit_half_pathways(
      base, neighbors[0], cls, side, index,
      [&](const CurveBuilder& cb) { return descend(descend, cb.finish_new_vertex(), 1); }, rng);
}

// All drawings derived from `d` by placing one new vertex and routing its
// edges in every valid way.
inline std::vector<Drawing> extend_by_vertex(const Drawing& d, int side, int index,
                                             const std::vector<VertexId>& neighbors,
                                             const ClassSpec& cls) {
  std::vector<Drawing> out;
  visit_vertex_insertions(d, side, index, neighbors, cls, [&](Drawing&& nd) {
    out.push_back(std::move(nd));
    return true;
  });
  return out;
}

enum class RunStatus : std::uint8_t { Complete, AbortedBudget, StoppedAtFirst };

struct LevelStats {
  GraphSpec spec;
  std::uint64_t raw = 0;
  std::uint64_t non_iso = 0;
  double seconds = 0;
  bool resumed = false;
};

struct GenerationRun {
  RunStatus status = RunStatus::Complete;
  std::vector<LevelStats> levels;
  DrawingSet final_set;
};

struct GenerateOptions {
  int jobs = 1;
  bool stop_at_first_target = false;
  double max_seconds = 0;            // 0 = unlimited
  std::uint64_t max_drawings = 0;    // materialized drawings across the run, 0 = unlimited
  bool validate_outputs = true;
  // Checkpoint sink, called after every completed level.
  std::function<void(const DrawingSet&, const std::string& fingerprint)> on_level;
  // Resume source: a previously completed set for the given level, if any.
  std::function<std::optional<DrawingSet>(const GraphSpec&, const std::string& fingerprint)>
      resume;
};

namespace detail {

struct BudgetState {
  std::chrono::steady_clock::time_point start;
  double max_seconds = 0;
  std::uint64_t max_drawings = 0;
  std::atomic<std::uint64_t> produced{0};
  std::atomic<bool> exhausted{false};

  // Counts one materialized drawing; false once any budget is exceeded.
  bool admit() {
    std::uint64_t n = ++produced;
    if (max_drawings && n > max_drawings) {
      exhausted = true;
      return false;
    }
    if (max_seconds > 0 && (n & 0x3f) == 0) {
      std::chrono::duration<double> el = std::chrono::steady_clock::now() - start;
      if (el.count() > max_seconds) {
        exhausted = true;
        return false;
      }
    }
    return !exhausted.load(std::memory_order_relaxed);
  }
};

// New-vertex parameters for one schedule step.
struct StepDelta {
  int side = 0;
  int index = 0;
};

inline StepDelta step_delta(const GraphSpec& from, const GraphSpec& to) {
  StepDelta sd;
  if (to.a == from.a + 1)
    sd.side = 0, sd.index = from.a;
  else
    sd.side = 1, sd.index = from.b;
  return sd;
}

inline std::vector<VertexId> neighbors_for(const Drawing& d, int new_side) {
  if (d.graph.is_complete()) return real_vertices_of_side(d, 0);
  return real_vertices_of_side(d, 1 - new_side);
}

inline Drawing swap_sides(Drawing d) {
  std::swap(d.graph.a, d.graph.b);
  for (auto& v : d.vertices)
    if (v.kind == VertexKind::Real && v.side != kPendingSide) v.side = 1 - v.side;
  return d;
}

// Representatives of a K_{a,a} level are canonical only up to exchanging the
// partite classes, so the next vertex must be tried on both sides of each
// representative or the mirror families are lost.
template <typename Fn>
bool visit_level_insertions(const Drawing& rep, const GraphSpec& parent_spec,
                            const GraphSpec& level_spec, const StepDelta& sd, const ClassSpec& cls,
                            Fn&& fn, std::mt19937_64* rng = nullptr) {
  Drawing base = rep;
  base.graph = level_spec;
  if (!visit_vertex_insertions(base, sd.side, sd.index, neighbors_for(base, sd.side), cls, fn,
                               rng))
    return false;
  if (!parent_spec.is_complete() && parent_spec.a == parent_spec.b) {
    Drawing mirrored = swap_sides(rep);
    mirrored.graph = level_spec;
    if (!visit_vertex_insertions(mirrored, sd.side, sd.index, neighbors_for(mirrored, sd.side),
                                 cls, fn, rng))
      return false;
  }
  return true;
}

}  // namespace detail

// Level-by-level exhaustive generation along the schedule: each level extends
// every representative of the previous one, validates the results, and keeps
// the first representative of each isomorphism class.
inline GenerationRun generate_all(const GraphSpec& target, const ClassSpec& cls,
                                  const InsertionSchedule& sched,
                                  const GenerateOptions& opt = {}) {
  if (!(sched.target() == target))
    throw ArgumentError("schedule does not end at the target graph");
  GenerationRun run;
  detail::BudgetState budget;
  budget.start = std::chrono::steady_clock::now();
  budget.max_seconds = opt.max_seconds;
  budget.max_drawings = opt.max_drawings;

  // Resume from the deepest checkpointed level, if any.
  std::size_t start_level = 0;
  DrawingSet current;
  if (opt.resume) {
    for (std::size_t i = sched.steps.size(); i-- > 0;) {
      if (auto found = opt.resume(sched.steps[i], sched.fingerprint(i))) {
        current = std::move(*found);
        start_level = i;
        break;
      }
    }
  }
  if (current.drawings.empty() && start_level == 0) {
    current = base_set(sched.steps[0], cls);
    if (opt.on_level) opt.on_level(current, sched.fingerprint(0));
  }
  {
    LevelStats ls;
    ls.spec = sched.steps[start_level];
    ls.raw = current.stats.raw_generated;
    ls.non_iso = current.drawings.size();
    ls.resumed = start_level > 0;
    run.levels.push_back(ls);
  }

  for (std::size_t L = start_level + 1; L < sched.steps.size(); ++L) {
    auto t0 = std::chrono::steady_clock::now();
    const GraphSpec& level_spec = sched.steps[L];
    detail::StepDelta sd = detail::step_delta(sched.steps[L - 1], level_spec);
    const bool last = L + 1 == sched.steps.size();
    const bool early_stop = opt.stop_at_first_target && last;

    struct Produced {
      std::string key;
      Drawing drawing;
    };
    std::atomic<std::uint64_t> raw{0};
    std::atomic<bool> stopped{false};
    std::atomic<bool> failed{false};
    std::string failure;

    DrawingSet next_set;
    next_set.spec = level_spec;
    next_set.cls = cls;
    std::unordered_set<std::string> seen;

    // Workers extend one representative at a time; results are committed into
    // the deduplicated set strictly in representative order, so the kept
    // representatives do not depend on thread count.
    std::mutex commit_mu;
    std::condition_variable commit_cv;
    std::size_t commit_turn = 0;

    auto process_rep = [&](std::size_t i) {
      std::vector<Produced> local;
      try {
        detail::visit_level_insertions(
            current.drawings[i], sched.steps[L - 1], level_spec, sd, cls, [&](Drawing&& nd) {
          if (stopped.load(std::memory_order_relaxed)) return false;
          if (!budget.admit()) return false;
          raw.fetch_add(1, std::memory_order_relaxed);
          if (opt.validate_outputs) {
            nd.validate();
            if (!drawing_satisfies(cls, nd))
              throw std::logic_error("generated drawing violates its class");
          }
          local.push_back(Produced{canonical_key(nd, cls.iso_mode), std::move(nd)});
          if (early_stop) {
            stopped = true;
            return false;
          }
          return true;
        });
      } catch (const std::exception& ex) {
        failed = true;
        failure = ex.what();
      }
      std::unique_lock<std::mutex> lk(commit_mu);
      commit_cv.wait(lk, [&] { return commit_turn == i; });
      if (!failed)
        for (auto& p : local)
          if (seen.insert(p.key).second) next_set.drawings.push_back(normalized(p.drawing));
      ++commit_turn;
      commit_cv.notify_all();
    };

    const int jobs = std::max(1, early_stop ? 1 : opt.jobs);
    if (jobs == 1 || current.drawings.size() <= 1) {
      for (std::size_t i = 0; i < current.drawings.size(); ++i) {
        process_rep(i);
        if ((early_stop && stopped) || budget.exhausted || failed) {
          commit_turn = current.drawings.size();
          break;
        }
      }
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&]() {
          for (std::size_t i = next.fetch_add(1); i < current.drawings.size();
               i = next.fetch_add(1)) {
            process_rep(i);
          }
        });
      for (auto& th : pool) th.join();
    }
    if (failed) throw std::logic_error("generation failed: " + failure);

    std::chrono::duration<double> el = std::chrono::steady_clock::now() - t0;
    next_set.stats.raw_generated = raw.load();
    next_set.stats.non_iso = next_set.drawings.size();
    next_set.stats.wall_seconds = el.count();

    LevelStats ls;
    ls.spec = level_spec;
    ls.raw = next_set.stats.raw_generated;
    ls.non_iso = next_set.stats.non_iso;
    ls.seconds = el.count();
    run.levels.push_back(ls);

    if (budget.exhausted) {
      run.status = RunStatus::AbortedBudget;
      run.final_set = std::move(next_set);  // partial; levels record the abort point
      return run;
    }
    if (early_stop && stopped) {
      run.status = RunStatus::StoppedAtFirst;
      run.final_set = std::move(next_set);
      return run;
    }
    if (opt.on_level) opt.on_level(next_set, sched.fingerprint(L));
    current = std::move(next_set);
    if (current.drawings.empty() && L + 1 < sched.steps.size()) {
      // Dead level: deeper levels stay empty.
      for (std::size_t M = L + 1; M < sched.steps.size(); ++M) {
        LevelStats empty;
        empty.spec = sched.steps[M];
        run.levels.push_back(empty);
        DrawingSet es;
        es.spec = sched.steps[M];
        es.cls = cls;
        if (opt.on_level) opt.on_level(es, sched.fingerprint(M));
      }
      run.final_set = DrawingSet{target, cls, {}, {}};
      return run;
    }
  }
  run.final_set = std::move(current);
  return run;
}

enum class Verdict : std::uint8_t { Member, NonMember, Unknown };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Member: return "Member";
    case Verdict::NonMember: return "NonMember";
    default: return "Unknown";
  }
}

struct MembershipResult {
  Verdict verdict = Verdict::Unknown;
  std::optional<Drawing> certificate;
  GenerationRun run;
};

// Member as soon as any full drawing of the target exists; NonMember only
// after exhaustive generation proves emptiness; Unknown on budget abort.
inline MembershipResult membership(const GraphSpec& target, const ClassSpec& cls,
                                   const InsertionSchedule& sched, GenerateOptions opt = {}) {
  opt.stop_at_first_target = true;
  MembershipResult res;
  res.run = generate_all(target, cls, sched, opt);
  if (res.run.status == RunStatus::AbortedBudget) {
    res.verdict = Verdict::Unknown;
    return res;
  }
  if (!res.run.final_set.drawings.empty()) {
    res.verdict = Verdict::Member;
    res.certificate = res.run.final_set.drawings.front();
  } else {
    res.verdict = Verdict::NonMember;
  }
  return res;
}

struct SampleBudget {
  std::uint64_t max_drawings = 2'000'000;  // materialized drawings across the search
  int frontier = 12;                       // children explored per node and level
  int extension_cap = 4000;                // extensions materialized per node
  double max_seconds = 0;                  // 0 = unlimited
};

struct SampleResult {
  Verdict verdict = Verdict::Unknown;  // Member or Unknown, never NonMember
  std::optional<Drawing> certificate;
  std::uint64_t drawings_explored = 0;
};

// Depth-first sampling through the insertion levels: explores a bounded,
// seed-shuffled frontier per level, preferring crossing-light extensions.
// A Member verdict is re-validated; Unknown carries no negative meaning.
inline SampleResult sample_dfs(const GraphSpec& target, const ClassSpec& cls,
                               const InsertionSchedule& sched, const SampleBudget& budget,
                               std::uint64_t seed) {
  if (!(sched.target() == target))
    throw ArgumentError("schedule does not end at the target graph");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  SampleResult res;
  auto t0 = std::chrono::steady_clock::now();

  auto out_of_budget = [&]() {
    if (res.drawings_explored >= budget.max_drawings) return true;
    if (budget.max_seconds > 0) {
      std::chrono::duration<double> el = std::chrono::steady_clock::now() - t0;
      if (el.count() > budget.max_seconds) return true;
    }
    return false;
  };

  auto dfs = [&](auto&& self, const Drawing& d, std::size_t level) -> std::optional<Drawing> {
    if (level + 1 == sched.steps.size()) return d;
    const GraphSpec& level_spec = sched.steps[level + 1];
    detail::StepDelta sd = detail::step_delta(sched.steps[level], level_spec);

    std::vector<Drawing> children;
    detail::visit_level_insertions(
        d, sched.steps[level], level_spec, sd, cls,
        [&](Drawing&& nd) {
          ++res.drawings_explored;
          children.push_back(std::move(nd));
          return static_cast<int>(children.size()) < budget.extension_cap && !out_of_budget();
        },
        &rng);
    // Crossing-light drawings leave the most room for later vertices.
    std::stable_sort(children.begin(), children.end(), [](const Drawing& a, const Drawing& b) {
      return a.num_crossing_vertices() < b.num_crossing_vertices();
    });
    std::vector<Drawing> picked;
    std::unordered_set<std::string> seen;
    for (Drawing& c : children) {
      if (static_cast<int>(picked.size()) >= budget.frontier) break;
      if (!seen.insert(canonical_key(c, cls.iso_mode)).second) continue;
      picked.push_back(std::move(c));
    }
    children.clear();
    children.shrink_to_fit();
    for (const Drawing& c : picked) {
      if (out_of_budget()) break;
      if (auto cert = self(self, c, level + 1)) return cert;
    }
    return std::nullopt;
  };

  DrawingSet bases = base_set(sched.steps[0], cls);
  for (const Drawing& b : bases.drawings) {
    if (out_of_budget()) break;
    if (auto cert = dfs(dfs, b, 0)) {
      cert->validate();
      if (!drawing_satisfies(cls, *cert))
        throw std::logic_error("sampled certificate violates its class");
      res.verdict = Verdict::Member;
      res.certificate = std::move(*cert);
      return res;
    }
  }
  return res;
}

}  // namespace beyondgen
