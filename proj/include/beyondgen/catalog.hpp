#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "beyondgen/generator.hpp"
#include "beyondgen/isomorphism.hpp"

namespace beyondgen {

struct CatalogRecord {
  std::string class_name;
  std::string graph;
  std::string iso_mode;
  std::string schedule;  // insertion history fingerprint
  std::uint64_t non_iso = 0;
  std::uint64_t raw_generated = 0;
  double wall_seconds = 0;
  std::string verdict;  // member / nonmember
  std::string path;     // set file, relative to the catalog root
  std::uint64_t content_hash = 0;
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace detail

// Directory-backed storage of drawing sets: one text file per (class, graph)
// pair under <root>/<class>/<graph>/set.txt plus a tab-separated index.
class Catalog {
 public:
  explicit Catalog(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const { return root_; }

  CatalogRecord save_set(const DrawingSet& set, const std::string& schedule_fp) {
    CatalogRecord rec;
    rec.class_name = set.cls.name();
    rec.graph = set.spec.to_string();
    rec.iso_mode = to_string(set.cls.iso_mode);
    rec.schedule = schedule_fp;
    rec.non_iso = set.drawings.size();
    rec.raw_generated = set.stats.raw_generated;
    rec.wall_seconds = set.stats.wall_seconds;
    rec.verdict = set.drawings.empty() ? "nonmember" : "member";
    rec.path = rec.class_name + "/" + rec.graph + "/set.txt";

    std::ostringstream os;
    os << "set " << rec.class_name << ' ' << rec.graph << " iso=" << rec.iso_mode
       << " raw=" << rec.raw_generated << " wall=" << std::fixed << std::setprecision(3)
       << rec.wall_seconds << " schedule=" << rec.schedule << '\n';
    for (const Drawing& d : set.drawings) d.serialize(os, rec.class_name);
    std::string content = os.str();
    rec.content_hash = detail::fnv1a(content);

    std::filesystem::path file = root_ / rec.path;
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    if (ec) throw IoError("cannot create " + file.parent_path().string() + ": " + ec.message());

    // Idempotent for identical content.
    bool write = true;
    if (std::ifstream existing{file, std::ios::binary}) {
      std::stringstream buf;
      buf << existing.rdbuf();
      write = buf.str() != content;
    }
    if (write) {
      std::ofstream out(file, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot write " + file.string());
      out << content;
      if (!out) throw IoError("write failed: " + file.string());
    }
    upsert_index(rec);
    return rec;
  }

  std::optional<CatalogRecord> find(const std::string& class_name,
                                    const std::string& graph) const {
    for (const CatalogRecord& r : records())
      if (r.class_name == class_name && r.graph == graph) return r;
    return std::nullopt;
  }

  // Loads and re-validates a stored set: drawing invariants, count agreement,
  // class membership, and pairwise distinctness of the canonical forms.
  DrawingSet load_set(const std::string& class_name, const std::string& graph) const {
    auto rec = find(class_name, graph);
    if (!rec)
      throw NotFoundError("no catalog record for " + class_name + " " + graph);
    std::filesystem::path file = root_ / rec->path;
    std::ifstream in(file, std::ios::binary);
    if (!in) throw NotFoundError("missing set file " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    std::string content = buf.str();
    if (detail::fnv1a(content) != rec->content_hash)
      throw InvariantError("set file does not match its index hash: " + file.string());

    std::istringstream is(content);
    std::string header;
    std::getline(is, header);
    std::istringstream hs(header);
    std::string tag, cls, graph_str;
    hs >> tag >> cls >> graph_str;
    if (tag != "set" || cls != class_name || graph_str != graph)
      throw InvariantError("set file header mismatch: " + file.string());

    DrawingSet set;
    set.spec = GraphSpec::parse(graph);
    set.cls = ClassSpec::parse(class_name);
    set.cls.iso_mode = iso_mode_from_string(rec->iso_mode);
    set.stats.raw_generated = rec->raw_generated;
    set.stats.wall_seconds = rec->wall_seconds;
    for (ParsedDrawing& pd : parse_drawings(is)) {
      if (pd.class_name != class_name)
        throw InvariantError("drawing block with foreign class in " + file.string());
      set.drawings.push_back(std::move(pd.drawing));
    }
    if (set.drawings.size() != rec->non_iso)
      throw InvariantError("stored count disagrees with the set file: " + file.string());
    std::unordered_set<std::string> keys;
    for (const Drawing& d : set.drawings) {
      d.validate();
      if (!(d.graph == set.spec))
        throw InvariantError("drawing of the wrong graph in " + file.string());
      if (!drawing_satisfies(set.cls, d))
        throw InvariantError("stored drawing violates its class: " + file.string());
      if (!keys.insert(canonical_key(d, set.cls.iso_mode)).second)
        throw InvariantError("stored set contains isomorphic duplicates: " + file.string());
    }
    set.stats.non_iso = set.drawings.size();
    return set;
  }

  std::vector<CatalogRecord> records() const {
    std::vector<CatalogRecord> out;
    std::ifstream in(root_ / "index.tsv");
    if (!in) return out;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      CatalogRecord r;
      std::string hash_hex;
      ls >> r.class_name >> r.graph >> r.iso_mode >> r.non_iso >> r.raw_generated >>
          r.wall_seconds >> r.verdict >> r.path >> hash_hex >> r.schedule;
      if (!ls && r.path.empty()) throw ParseError("bad index line: " + line);
      r.content_hash = std::stoull(hash_hex, nullptr, 16);
      out.push_back(std::move(r));
    }
    return out;
  }

  // Resume hook for generate_all: a level set saved under a compatible
  // insertion history.
  std::optional<DrawingSet> resume_level(const ClassSpec& cls, const GraphSpec& spec,
                                         const std::string& schedule_fp) const {
    auto rec = find(cls.name(), spec.to_string());
    if (!rec) return std::nullopt;
    if (rec->schedule != schedule_fp || rec->iso_mode != to_string(cls.iso_mode))
      return std::nullopt;
    return load_set(cls.name(), spec.to_string());
  }

 private:
  void upsert_index(const CatalogRecord& rec) {
    std::vector<CatalogRecord> all = records();
    bool replaced = false;
    for (CatalogRecord& r : all)
      if (r.class_name == rec.class_name && r.graph == rec.graph) {
        r = rec;
        replaced = true;
      }
    if (!replaced) all.push_back(rec);
    std::filesystem::path tmp = root_ / "index.tsv.tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw IoError("cannot write " + tmp.string());
      out << "class\tgraph\tiso\tnon_iso\traw\twall_s\tverdict\tpath\thash\tschedule\n";
      for (const CatalogRecord& r : all) {
        out << r.class_name << '\t' << r.graph << '\t' << r.iso_mode << '\t' << r.non_iso << '\t'
            << r.raw_generated << '\t' << std::fixed << std::setprecision(3) << r.wall_seconds
            << '\t' << r.verdict << '\t' << r.path << '\t' << std::hex << r.content_hash
            << std::dec << '\t' << r.schedule << '\n';
      }
    }
    std::filesystem::rename(tmp, root_ / "index.tsv");
  }

  std::filesystem::path root_;
};

enum class ReportFormat : std::uint8_t { Text, Delimited };

// Renders one row per (class, graph) with verdict and counts.
inline std::string report(const std::vector<CatalogRecord>& records, ReportFormat format) {
  std::ostringstream os;
  if (format == ReportFormat::Delimited) {
    os << "class\tgraph\tverdict\tnon_iso\traw\twall_s\n";
    for (const CatalogRecord& r : records)
      os << r.class_name << '\t' << r.graph << '\t' << r.verdict << '\t' << r.non_iso << '\t'
         << r.raw_generated << '\t' << std::fixed << std::setprecision(3) << r.wall_seconds
         << '\n';
    return os.str();
  }
  os << std::left << std::setw(16) << "class" << std::setw(8) << "graph" << std::setw(11)
     << "verdict" << std::right << std::setw(9) << "non-iso" << std::setw(10) << "raw"
     << std::setw(10) << "wall_s" << '\n';
  for (const CatalogRecord& r : records) {
    os << std::left << std::setw(16) << r.class_name << std::setw(8) << r.graph << std::setw(11)
       << r.verdict << std::right << std::setw(9) << r.non_iso << std::setw(10) << r.raw_generated
       << std::setw(10) << std::fixed << std::setprecision(3) << r.wall_seconds << '\n';
  }
  return os.str();
}

// Parses a delimited report back into records (round-trip check support).
inline std::vector<CatalogRecord> parse_report(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  if (line != "class\tgraph\tverdict\tnon_iso\traw\twall_s")
    throw ParseError("bad report header: " + line);
  std::vector<CatalogRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    CatalogRecord r;
    ls >> r.class_name >> r.graph >> r.verdict >> r.non_iso >> r.raw_generated >> r.wall_seconds;
    if (!ls) throw ParseError("bad report line: " + line);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace beyondgen
