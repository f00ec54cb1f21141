#pragma once

// JSON document model: presentations with bunch data and modification
// scripts on the way in, reports and equivalence certificates on the way
// out. Integers ride as JSON numbers only inside the 53-bit safe range,
// rationals always as canonical fraction strings.

#include <optional>
#include <string>
#include <vector>

#include "bunched/modify.hpp"
#include "json.hpp"

namespace bunched::io {

using json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

// one entry of a modification script; variable indices are 1-based in
// documents and 0-based here
struct ScriptStep {
  std::string kind;  // "subdivide_at", "contract" or "retarget_chamber"
  IVec center;
  Index var = 0;
  QVec target;
};

struct InputDocument {
  bunch::CoxPresentation pres;
  std::optional<QVec> chamber_point;
  std::vector<std::vector<Index>> bunch_sets;  // 0-based weight indexes
  bool has_bunch = false;
  std::optional<IMat> fan_basis;
  std::vector<ScriptStep> script;
};

// scalar encoding
json json_int(const Int& v);
json json_rat(const Rat& v);
Int parse_int(const json& j);
Rat parse_rat(const json& j);
json json_ivec(const IVec& v);
json json_imat(const IMat& m);
IVec parse_ivec(const json& j);
IMat parse_imat(const json& j, Index cols);

// document handling
InputDocument parse_input(const json& j);
InputDocument parse_input_text(const std::string& text);
InputDocument load_input(const std::string& path);
json serialize_input(const InputDocument& doc);

std::vector<ScriptStep> parse_script(const json& j);
std::vector<ScriptStep> load_script(const std::string& path);

// the bunched ring a document describes; toric = ignore the relation
bunch::BunchedRing ring_of(const InputDocument& doc, bool toric = false,
                           Index max_vars = bunch::kDefaultMaxVars);

// model state honoring the optional pinned fan basis
modify::ModelState model_of(const InputDocument& doc,
                            Index max_vars = bunch::kDefaultMaxVars);

// report builders
json report_analyze(const InputDocument& doc, bool toric, Index max_vars);
json report_gitfan(const InputDocument& doc, bool toric, Index max_vars);
json report_modify(const InputDocument& doc,
                   const std::vector<ScriptStep>& steps, Index max_vars);
json report_reduce(const InputDocument& doc, Index max_vars);
json report_compare(const InputDocument& a, const InputDocument& b);

// human-readable rendering of any report built above
std::string render_text(const json& report);

}  // namespace bunched::io
