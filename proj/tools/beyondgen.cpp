// beyondgen: exhaustive generation of non-isomorphic simple drawings of
// complete and complete bipartite graphs under beyond-planarity constraints.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "beyondgen/catalog.hpp"
#include "beyondgen/generator.hpp"
#include "beyondgen/render.hpp"

namespace {

using namespace beyondgen;

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

std::string default_out() {
  if (const char* env = std::getenv("BEYONDGEN_CATALOG")) return env;
  return "catalog";
}

struct CommonArgs {
  std::string cls;
  std::string graph;
  std::string schedule;
  std::string out = default_out();
  bool reflections = true;
  int jobs = 1;
  double max_seconds = 0;
  std::uint64_t max_drawings = 0;
};

ClassSpec class_spec(const CommonArgs& a) {
  ClassSpec c = ClassSpec::parse(a.cls);
  c.iso_mode = a.reflections ? IsoMode::IncludeReflections : IsoMode::OrientationPreserving;
  return c;
}

InsertionSchedule schedule_for(const CommonArgs& a, const GraphSpec& target) {
  if (a.schedule.empty()) return InsertionSchedule::default_for(target);
  InsertionSchedule s = InsertionSchedule::parse(a.schedule);
  if (!(s.target() == target))
    throw ArgumentError("schedule does not end at " + target.to_string());
  return s;
}

void add_common(CLI::App* cmd, CommonArgs& a, bool needs_graph = true) {
  cmd->add_option("--class", a.cls, "drawing class (1planar..5planar, quasiplanar, fanplanar, "
                                    "fancrossingfree, gapplanar)")
      ->required();
  if (needs_graph)
    cmd->add_option("--graph", a.graph, "target graph, K<n> or K<a>,<b>")->required();
  cmd->add_option("--schedule", a.schedule, "insertion schedule override, e.g. K2,2:K2,3:K3,3");
  cmd->add_option("--out", a.out, "catalog directory (default $BEYONDGEN_CATALOG or ./catalog)");
  cmd->add_flag("--reflections,!--orientation-preserving", a.reflections,
                "treat mirror images as isomorphic (default on)");
  cmd->add_option("--jobs", a.jobs, "worker threads for generation")->check(CLI::Range(1, 256));
  cmd->add_option("--max-seconds", a.max_seconds, "abort with a checkpoint after this long");
  cmd->add_option("--max-drawings", a.max_drawings, "abort after producing this many drawings");
}

GenerateOptions options_for(const CommonArgs& a, Catalog& cat, const ClassSpec& cls, bool fresh) {
  GenerateOptions opt;
  opt.jobs = a.jobs;
  opt.max_seconds = a.max_seconds;
  opt.max_drawings = a.max_drawings;
  opt.on_level = [&cat](const DrawingSet& set, const std::string& fp) { cat.save_set(set, fp); };
  if (!fresh)
    opt.resume = [&cat, cls](const GraphSpec& spec, const std::string& fp) {
      return cat.resume_level(cls, spec, fp);
    };
  return opt;
}

void print_levels(const GenerationRun& run) {
  std::printf("%-8s %12s %12s %10s\n", "graph", "general", "non-iso", "seconds");
  for (const LevelStats& l : run.levels)
    std::printf("%-8s %12llu %12llu %10.3f%s\n", l.spec.to_string().c_str(),
                static_cast<unsigned long long>(l.raw),
                static_cast<unsigned long long>(l.non_iso), l.seconds,
                l.resumed ? "  (resumed)" : "");
}

int cmd_generate(const CommonArgs& a, bool fresh) {
  GraphSpec target = GraphSpec::parse(a.graph);
  ClassSpec cls = class_spec(a);
  InsertionSchedule sched = schedule_for(a, target);
  Catalog cat(a.out);
  GenerationRun run = generate_all(target, cls, sched, options_for(a, cat, cls, fresh));
  print_levels(run);
  if (run.status == RunStatus::AbortedBudget) {
    std::printf("budget exhausted; completed levels are checkpointed under %s\n",
                cat.root().string().c_str());
    return kExitBudget;
  }
  std::printf("%s %s: %llu non-isomorphic drawings (%llu generated)\n", cls.name().c_str(),
              target.to_string().c_str(),
              static_cast<unsigned long long>(run.final_set.drawings.size()),
              static_cast<unsigned long long>(run.final_set.stats.raw_generated));
  return 0;
}

int cmd_check(const CommonArgs& a, const std::string& cert_path) {
  GraphSpec target = GraphSpec::parse(a.graph);
  ClassSpec cls = class_spec(a);
  InsertionSchedule sched = schedule_for(a, target);
  Catalog cat(a.out);
  MembershipResult res = membership(target, cls, sched, options_for(a, cat, cls, false));
  std::printf("%s\n", to_string(res.verdict).c_str());
  if (res.verdict == Verdict::Unknown) {
    std::printf("budget exhausted; completed levels are checkpointed under %s\n",
                cat.root().string().c_str());
    return kExitBudget;
  }
  if (res.certificate) {
    std::filesystem::path p = cert_path.empty()
                                  ? cat.root() / cls.name() / (target.to_string() + ".cert.txt")
                                  : std::filesystem::path(cert_path);
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(p);
    res.certificate->serialize(out, cls.name());
    std::printf("certificate written to %s\n", p.string().c_str());
  }
  return 0;
}

int cmd_sample(const CommonArgs& a, std::uint64_t seed, std::uint64_t budget, int frontier,
               const std::string& cert_path) {
  GraphSpec target = GraphSpec::parse(a.graph);
  ClassSpec cls = class_spec(a);
  InsertionSchedule sched = schedule_for(a, target);
  SampleBudget sb;
  if (budget) sb.max_drawings = budget;
  if (frontier) sb.frontier = frontier;
  if (a.max_seconds > 0) sb.max_seconds = a.max_seconds;
  SampleResult res = sample_dfs(target, cls, sched, sb, seed);
  std::printf("%s (%llu drawings explored)\n", to_string(res.verdict).c_str(),
              static_cast<unsigned long long>(res.drawings_explored));
  if (res.certificate) {
    std::filesystem::path p =
        cert_path.empty()
            ? std::filesystem::path(a.out) / cls.name() / (target.to_string() + ".cert.txt")
            : std::filesystem::path(cert_path);
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(p);
    res.certificate->serialize(out, cls.name());
    std::printf("certificate written to %s\n", p.string().c_str());
  }
  return 0;
}

int cmd_count(const std::string& expected_file, const CommonArgs& a, bool strict_raw) {
  std::ifstream in(expected_file);
  if (!in) throw IoError("cannot read " + expected_file);
  Catalog cat(a.out);
  int failures = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string cls_name, graph;
    long long expected_iso = -1, expected_raw = -1;
    char comma;
    std::getline(ls, cls_name, ',');
    std::getline(ls, graph, ',');
    ls >> expected_iso;
    if (ls >> comma >> expected_raw) {
    }
    auto trim = [](std::string& s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
    };
    trim(cls_name);
    trim(graph);
    if (cls_name.empty() || graph.empty() || expected_iso < 0)
      throw ParseError("bad expected-counts row: " + line);

    CommonArgs row = a;
    row.cls = cls_name;
    row.graph = graph;
    ClassSpec cls = class_spec(row);
    GraphSpec target = GraphSpec::parse(graph);
    auto rec = cat.find(cls.name(), target.to_string());
    if (!rec) {
      InsertionSchedule sched = schedule_for(row, target);
      generate_all(target, cls, sched, options_for(row, cat, cls, false));
      rec = cat.find(cls.name(), target.to_string());
    }
    bool ok = rec && rec->non_iso == static_cast<std::uint64_t>(expected_iso);
    if (ok && expected_raw >= 0 && rec->raw_generated != static_cast<std::uint64_t>(expected_raw)) {
      std::printf("note: %s %s general %llu differs from expected %lld (schedule-dependent)\n",
                  cls_name.c_str(), graph.c_str(),
                  static_cast<unsigned long long>(rec->raw_generated), expected_raw);
      if (strict_raw) ok = false;
    }
    if (!ok) {
      ++failures;
      std::printf("MISMATCH %s %s: expected %lld, got %llu\n", cls_name.c_str(), graph.c_str(),
                  expected_iso,
                  rec ? static_cast<unsigned long long>(rec->non_iso) : 0ULL);
    } else {
      std::printf("ok %s %s: %lld\n", cls_name.c_str(), graph.c_str(), expected_iso);
    }
  }
  if (failures) {
    std::printf("%d mismatching rows\n", failures);
    return kExitError;
  }
  std::printf("all rows match\n");
  return 0;
}

int cmd_render(const std::string& in_path, const std::string& out_path, int index, int face) {
  std::ifstream in(in_path);
  if (!in) throw IoError("cannot read " + in_path);
  std::string first;
  std::getline(in, first);
  if (first.rfind("set ", 0) != 0) {
    in.seekg(0);
  }
  auto parsed = parse_drawings(in);
  if (parsed.empty()) throw NotFoundError("no drawings in " + in_path);
  if (index < 0 || index >= static_cast<int>(parsed.size()))
    throw ArgumentError("drawing index out of range (file has " +
                        std::to_string(parsed.size()) + ")");
  std::string svg = render_svg(parsed[index].drawing,
                               face < 0 ? kInvalidId : static_cast<FaceId>(face));
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot write " + out_path);
  out << svg;
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

int cmd_report(const CommonArgs& a, const std::string& format) {
  Catalog cat(a.out);
  auto records = cat.records();
  std::cout << report(records, format == "delimited" ? ReportFormat::Delimited
                                                     : ReportFormat::Text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generation of topological drawings under beyond-planarity constraints"};
  app.require_subcommand(1);

  CommonArgs gen_args, resume_args, check_args, sample_args, count_args, report_args;
  std::string cert_path, sample_cert, expected_file, render_in, render_out, report_format = "text";
  std::uint64_t seed = 1, sample_budget = 0;
  int sample_frontier = 0, render_index = 0, render_face = -1;
  bool strict_raw = false;

  CLI::App* gen = app.add_subcommand("generate", "generate all non-isomorphic drawings");
  add_common(gen, gen_args);

  CLI::App* resume = app.add_subcommand("resume", "continue a checkpointed generation");
  add_common(resume, resume_args);

  CLI::App* check = app.add_subcommand("check", "decide class membership");
  add_common(check, check_args);
  check->add_option("--cert", cert_path, "where to write the certificate drawing");

  CLI::App* count = app.add_subcommand("count", "compare produced counts against expected");
  add_common(count, count_args, false);
  count->get_option("--class")->required(false);
  count->add_option("--expected", expected_file, "CSV: class, graph, non_iso[, general]")
      ->required();
  count->add_flag("--strict-raw", strict_raw, "fail on general-count differences too");

  CLI::App* sample = app.add_subcommand("sample", "DFS-like sampling for a certificate");
  add_common(sample, sample_args);
  sample->add_option("--seed", seed, "random seed");
  sample->add_option("--budget", sample_budget, "max drawings to explore");
  sample->add_option("--frontier", sample_frontier, "children kept per level");
  sample->add_option("--cert", sample_cert, "where to write the certificate drawing");

  CLI::App* render = app.add_subcommand("render", "render a stored drawing as SVG");
  render->add_option("--in", render_in, "set or certificate file")->required();
  render->add_option("--out", render_out, "output SVG path")->required();
  render->add_option("--index", render_index, "drawing index within the file");
  render->add_option("--face", render_face, "outer face id (default: automatic)");

  CLI::App* rep = app.add_subcommand("report", "render the catalog index");
  rep->add_option("--out", report_args.out, "catalog directory");
  rep->add_option("--format", report_format, "text or delimited")
      ->check(CLI::IsMember({"text", "delimited"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_args, false);
    if (resume->parsed()) return cmd_generate(resume_args, false);
    if (check->parsed()) return cmd_check(check_args, cert_path);
    if (count->parsed()) return cmd_count(expected_file, count_args, strict_raw);
    if (sample->parsed())
      return cmd_sample(sample_args, seed, sample_budget, sample_frontier, sample_cert);
    if (render->parsed()) return cmd_render(render_in, render_out, render_index, render_face);
    if (rep->parsed()) return cmd_report(report_args, report_format);
  } catch (const ArgumentError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitUsage;
}
