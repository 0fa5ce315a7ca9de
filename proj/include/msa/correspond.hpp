#pragma once

// Frame correspondence for the D, T and 4 schemas against seriality,
// reflexivity and transitivity, checked exhaustively on small frames.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msa/kripke.hpp"
#include "msa/syntax.hpp"

namespace msa {

using Relation = std::vector<std::vector<bool>>;

enum class Schema { DiaTop, Four, T };

const std::vector<Schema>& all_schemas();
std::string schema_name(Schema s);  // "dia-top", "4", "t"
Schema schema_from_name(const std::string& name);
Term schema_formula(Schema s);
std::string condition_name(Schema s);  // "serial", "transitive", "reflexive"
bool condition_holds(const FrameFlags& flags, Schema s);

FrameFlags frame_properties(const Relation& r);

struct SchemaCheck {
  bool valid = true;
  // Counterexample: valuation of p as a bitmask over worlds, and the world.
  std::optional<std::uint64_t> valuation;
  std::optional<std::size_t> world;
};

// Exhaustive over the 2^|W| valuations of p; |W| <= 20.
SchemaCheck validates_schema(const Relation& r, Schema s);

struct CorrespondenceRow {
  Schema schema = Schema::DiaTop;
  std::size_t frames = 0;
  std::size_t both = 0;           // schema valid and condition holds
  std::size_t neither = 0;
  std::size_t schema_only = 0;    // valid but condition fails
  std::size_t condition_only = 0; // condition holds but not valid
  std::size_t discrepancies() const { return schema_only + condition_only; }
};

struct CorrespondenceReport {
  int max_worlds = 0;
  bool iso_reduced = false;
  std::vector<std::size_t> frames_by_size;  // index n-1 holds the count for n worlds
  std::vector<CorrespondenceRow> rows;
  std::vector<std::string> discrepancy_examples;
  std::size_t frames() const;
  std::size_t discrepancies() const;
};

// All relations on 1..max_worlds worlds; with iso_reduce one per isomorphism class.
CorrespondenceReport correspondence_report(int max_worlds, bool iso_reduce = false,
                                           const std::vector<Schema>& schemas = all_schemas());

std::string format_report(const CorrespondenceReport& r);
std::string report_to_json(const CorrespondenceReport& r);

}  // namespace msa
