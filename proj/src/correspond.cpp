#include "msa/correspond.hpp"

#include <algorithm>
#include <bit>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace msa {

namespace {

using Mask = std::uint64_t;

std::vector<Mask> successors(const Relation& r) {
  std::vector<Mask> out(r.size(), 0);
  for (std::size_t w = 0; w < r.size(); ++w)
    for (std::size_t v = 0; v < r.size(); ++v)
      if (r[w][v]) out[w] |= Mask{1} << v;
  return out;
}

Mask box(const std::vector<Mask>& succ, Mask s) {
  Mask out = 0;
  for (std::size_t w = 0; w < succ.size(); ++w)
    if ((succ[w] & ~s) == 0) out |= Mask{1} << w;
  return out;
}

Mask dia(const std::vector<Mask>& succ, Mask s) {
  Mask out = 0;
  for (std::size_t w = 0; w < succ.size(); ++w)
    if (succ[w] & s) out |= Mask{1} << w;
  return out;
}

Relation decode_relation(std::size_t n, std::uint64_t bits) {
  Relation r(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) r[a][b] = (bits >> (a * n + b)) & 1;
  return r;
}

std::uint64_t encode_relation(const Relation& r, const std::vector<std::size_t>& perm) {
  const std::size_t n = r.size();
  std::uint64_t bits = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (r[a][b]) bits |= std::uint64_t{1} << (perm[a] * n + perm[b]);
  return bits;
}

bool is_canonical(const Relation& r, std::uint64_t bits) {
  std::vector<std::size_t> perm(r.size());
  std::iota(perm.begin(), perm.end(), 0);
  while (std::next_permutation(perm.begin(), perm.end())) {
    if (encode_relation(r, perm) < bits) return false;
  }
  return true;
}

std::string relation_text(const Relation& r) {
  std::string s = "{";
  bool first = true;
  for (std::size_t a = 0; a < r.size(); ++a)
    for (std::size_t b = 0; b < r.size(); ++b)
      if (r[a][b]) {
        s += (first ? "" : ",") + std::to_string(a) + "R" + std::to_string(b);
        first = false;
      }
  return s + "} on " + std::to_string(r.size()) + " worlds";
}

}  // namespace

const std::vector<Schema>& all_schemas() {
  static const std::vector<Schema> all{Schema::DiaTop, Schema::T, Schema::Four};
  return all;
}

std::string schema_name(Schema s) {
  switch (s) {
    case Schema::DiaTop: return "dia-top";
    case Schema::Four: return "4";
    case Schema::T: return "t";
  }
  return "";
}

Schema schema_from_name(const std::string& name) {
  for (Schema s : all_schemas()) {
    if (schema_name(s) == name) return s;
  }
  throw Error("unknown schema '" + name + "' (expected dia-top, 4 or t)");
}

Term schema_formula(Schema s) {
  const Term p = gen("p");
  switch (s) {
    case Schema::DiaTop: return dia(one());
    case Schema::Four: return imp(box(p), box(box(p)));
    case Schema::T: return imp(box(p), p);
  }
  return one();
}

std::string condition_name(Schema s) {
  switch (s) {
    case Schema::DiaTop: return "serial";
    case Schema::Four: return "transitive";
    case Schema::T: return "reflexive";
  }
  return "";
}

bool condition_holds(const FrameFlags& f, Schema s) {
  switch (s) {
    case Schema::DiaTop: return f.serial;
    case Schema::Four: return f.transitive;
    case Schema::T: return f.reflexive;
  }
  return false;
}

FrameFlags frame_properties(const Relation& r) {
  const std::size_t n = r.size();
  FrameFlags f{true, true, true};
  for (std::size_t x = 0; x < n; ++x) {
    if (!r[x][x]) f.reflexive = false;
    if (std::none_of(r[x].begin(), r[x].end(), [](bool e) { return e; })) f.serial = false;
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (r[x][y] && r[y][z] && !r[x][z]) f.transitive = false;
  }
  return f;
}

SchemaCheck validates_schema(const Relation& r, Schema s) {
  const std::size_t n = r.size();
  if (n > 20) throw Error("validates_schema: at most 20 worlds");
  const auto succ = successors(r);
  const Mask all = n == 64 ? ~Mask{0} : (Mask{1} << n) - 1;
  SchemaCheck out;
  for (Mask v = 0; v <= all; ++v) {
    Mask truth = 0;
    switch (s) {
      case Schema::DiaTop: truth = dia(succ, all); break;
      case Schema::Four: truth = (~box(succ, v) | box(succ, box(succ, v))) & all; break;
      case Schema::T: truth = (~box(succ, v) | v) & all; break;
    }
    if (truth != all) {
      out.valid = false;
      out.valuation = v;
      out.world = static_cast<std::size_t>(std::countr_zero(~truth & all));
      return out;
    }
  }
  return out;
}

std::size_t CorrespondenceReport::frames() const {
  return std::accumulate(frames_by_size.begin(), frames_by_size.end(), std::size_t{0});
}

std::size_t CorrespondenceReport::discrepancies() const {
  std::size_t d = 0;
  for (const auto& row : rows) d += row.discrepancies();
  return d;
}

CorrespondenceReport correspondence_report(int max_worlds, bool iso_reduce, const std::vector<Schema>& schemas) {
  if (max_worlds < 1) throw Error("correspondence_report: maxWorlds must be at least 1");
  if (max_worlds > 5) throw Error("correspondence_report: maxWorlds above 5 is out of reach");
  CorrespondenceReport rep;
  rep.max_worlds = max_worlds;
  rep.iso_reduced = iso_reduce;
  for (Schema s : schemas) rep.rows.push_back({s, 0, 0, 0, 0, 0});
  for (int n = 1; n <= max_worlds; ++n) {
    const std::size_t un = static_cast<std::size_t>(n);
    const std::uint64_t count = std::uint64_t{1} << (un * un);
    std::size_t seen = 0;
    for (std::uint64_t bits = 0; bits < count; ++bits) {
      Relation r = decode_relation(un, bits);
      if (iso_reduce && !is_canonical(r, bits)) continue;
      ++seen;
      const FrameFlags flags = frame_properties(r);
      for (auto& row : rep.rows) {
        ++row.frames;
        const bool valid = validates_schema(r, row.schema).valid;
        const bool cond = condition_holds(flags, row.schema);
        if (valid && cond) ++row.both;
        else if (!valid && !cond) ++row.neither;
        else {
          (valid ? row.schema_only : row.condition_only) += 1;
          if (rep.discrepancy_examples.size() < 10) {
            rep.discrepancy_examples.push_back(schema_name(row.schema) + " on " + relation_text(r));
          }
        }
      }
    }
    rep.frames_by_size.push_back(seen);
  }
  return rep;
}

std::string format_report(const CorrespondenceReport& r) {
  std::ostringstream out;
  out << "Claim: the schema is valid on a frame iff R satisfies the condition.\n";
  out << "Frames: all relations on 1.." << r.max_worlds << " worlds" << (r.iso_reduced ? " up to isomorphism" : "")
      << " (" << r.frames() << " frames); valuations: every subset of W for the atom p.\n\n";
  out << std::left << std::setw(10) << "Axiom" << std::setw(14) << "Formula" << std::setw(28) << "Condition on R"
      << std::right << std::setw(8) << "frames" << std::setw(8) << "both" << std::setw(8) << "neither"
      << std::setw(12) << "valid-only" << std::setw(11) << "cond-only" << "\n";
  for (const auto& row : r.rows) {
    std::string label, formula, cond;
    switch (row.schema) {
      case Schema::DiaTop: label = "D"; formula = "<>T"; cond = "(Ax)(Ey) xRy"; break;
      case Schema::T: label = "T"; formula = "[]p -> p"; cond = "reflexive: xRx"; break;
      case Schema::Four: label = "4"; formula = "[]p -> [][]p"; cond = "transitive*: xRy & yRz => xRz"; break;
    }
    out << std::left << std::setw(10) << label << std::setw(14) << formula << std::setw(28) << cond << std::right
        << std::setw(8) << row.frames << std::setw(8) << row.both << std::setw(8) << row.neither << std::setw(12)
        << row.schema_only << std::setw(11) << row.condition_only << "\n";
  }
  out << "\nDiscrepancies: " << r.discrepancies() << "\n";
  for (const auto& e : r.discrepancy_examples) out << "  " << e << "\n";
  out << "* transitivity is checked as xRy & yRz => xRz.\n";
  return out.str();
}

std::string report_to_json(const CorrespondenceReport& r) {
  nlohmann::json doc;
  doc["max_worlds"] = r.max_worlds;
  doc["iso_reduced"] = r.iso_reduced;
  doc["frames_by_size"] = r.frames_by_size;
  doc["frames"] = r.frames();
  doc["valuations"] = "all subsets of W for p";
  doc["discrepancies"] = r.discrepancies();
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows) {
    doc["rows"].push_back({{"schema", schema_name(row.schema)},
                           {"condition", condition_name(row.schema)},
                           {"frames", row.frames},
                           {"both", row.both},
                           {"neither", row.neither},
                           {"valid_only", row.schema_only},
                           {"condition_only", row.condition_only}});
  }
  doc["discrepancy_examples"] = r.discrepancy_examples;
  return doc.dump();
}

}  // namespace msa
