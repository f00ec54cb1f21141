#include "bunched/io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

namespace bunched::io {

using bunch::BunchedRing;
using bunch::CoxPresentation;
using cones::Cone;
using modify::ModelState;
using modify::ModificationRecord;
using modify::ModificationStep;

namespace {

// 2^53: beyond this a JSON number reader may round
const Int kSafe = Int(1) << 53;

const json& need(const json& j, const char* key) {
  if (!j.is_object()) fail_parse(std::string("expected an object holding \"") +
                                 key + "\"");
  if (!j.contains(key)) fail_parse(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

bool get_bool(const json& j, const char* what) {
  if (!j.is_boolean()) fail_parse(std::string(what) + " must be a boolean");
  return j.get<bool>();
}

Index small_index(const json& j, const char* what) {
  Int v = parse_int(j);
  if (v < 0 || v > 1024) fail_parse(std::string(what) + " out of range");
  return static_cast<Index>(v.get_si());
}

std::vector<std::vector<Int>> int_rows(const json& j, const char* what) {
  if (!j.is_array()) fail_parse(std::string(what) + " must be an array of rows");
  std::vector<std::vector<Int>> out;
  for (const json& row : j) {
    if (!row.is_array())
      fail_parse(std::string(what) + " rows must be arrays");
    std::vector<Int> r;
    for (const json& e : row) r.push_back(parse_int(e));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

json json_int(const Int& v) {
  Int a = v < 0 ? Int(-v) : v;
  if (a < kSafe) return json(static_cast<std::int64_t>(v.get_si()));
  return json(v.get_str());
}

json json_rat(const Rat& v) { return json(v.get_str()); }

Int parse_int(const json& j) {
  if (j.is_number_unsigned()) {
    std::uint64_t u = j.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
      fail_parse("integer too large for a JSON number; use a string");
    return Int(static_cast<long>(u));
  }
  if (j.is_number_integer())
    return Int(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_number_float())
    fail_parse("floating point numbers are not accepted; use integer strings");
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      return Int(s);
    } catch (const std::invalid_argument&) {
      fail_parse("bad integer literal \"" + s + "\"");
    }
  }
  fail_parse("expected an integer, got " + std::string(j.type_name()));
}

Rat parse_rat(const json& j) {
  if (j.is_number_integer() || j.is_number_unsigned()) return Rat(parse_int(j));
  if (j.is_number_float())
    fail_parse("floating point numbers are not accepted; use \"p/q\" strings");
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const size_t slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rat(Int(s));
      Int num(s.substr(0, slash));
      Int den(s.substr(slash + 1));
      if (den == 0) fail_parse("zero denominator in \"" + s + "\"");
      Rat r(num, den);
      r.canonicalize();
      return r;
    } catch (const std::invalid_argument&) {
      fail_parse("bad rational literal \"" + s + "\"");
    }
  }
  fail_parse("expected a rational, got " + std::string(j.type_name()));
}

json json_ivec(const IVec& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(json_int(v[i]));
  return out;
}

json json_imat(const IMat& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i) out.push_back(json_ivec(IVec(m.row(i))));
  return out;
}

IVec parse_ivec(const json& j) {
  if (!j.is_array()) fail_parse("expected an array of integers");
  IVec v(static_cast<Index>(j.size()));
  Index i = 0;
  for (const json& e : j) v[i++] = parse_int(e);
  return v;
}

IMat parse_imat(const json& j, Index cols) {
  std::vector<std::vector<Int>> rows = int_rows(j, "matrix");
  IMat m(static_cast<Index>(rows.size()), cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<Index>(rows[i].size()) != cols)
      fail_parse("matrix rows must have length " + std::to_string(cols));
    for (Index c = 0; c < cols; ++c) m(static_cast<Index>(i), c) = rows[i][c];
  }
  return m;
}

namespace {

json json_qvec(const QVec& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(json_rat(v[i]));
  return out;
}

QVec parse_qvec(const json& j) {
  if (!j.is_array()) fail_parse("expected an array of rationals");
  QVec v(static_cast<Index>(j.size()));
  Index i = 0;
  for (const json& e : j) v[i++] = parse_rat(e);
  return v;
}

json json_cone(const Cone& C) {
  json out;
  json rays = json::array();
  for (const IVec& r : C.extreme_rays()) rays.push_back(json_ivec(r));
  out["rays"] = rays;
  json lin = json::array();
  for (const IVec& l : C.lineality_gens()) lin.push_back(json_ivec(l));
  out["lineality"] = lin;
  return out;
}

json json_group(const groups::AbelianGroup& G) {
  json out;
  out["rank"] = static_cast<std::int64_t>(G.rank);
  json orders = json::array();
  for (const Int& d : G.torsion_orders) orders.push_back(json_int(d));
  out["torsion_orders"] = orders;
  return out;
}

json json_ge(const groups::GroupElement& g) {
  json out;
  out["free"] = json_ivec(g.free);
  out["torsion"] = json_ivec(g.torsion);
  return out;
}

json json_grading(const groups::GradingMap& Q) {
  json out;
  out["rank"] = static_cast<std::int64_t>(Q.target.rank);
  json orders = json::array();
  for (const Int& d : Q.target.torsion_orders) orders.push_back(json_int(d));
  out["torsion_orders"] = orders;
  out["free_rows"] = json_imat(Q.free_rows);
  out["torsion_rows"] = json_imat(Q.torsion_rows);
  return out;
}

json json_poly(const poly::GradedPoly& f) {
  json out = json::array();
  for (const poly::Term& t : f.terms) {
    json jt;
    jt["coeff"] = json_rat(t.coeff);
    jt["exponents"] = json_ivec(t.exps);
    out.push_back(jt);
  }
  return out;
}

// faces travel as 1-based variable index sets
json json_face(uint64_t mask) {
  json out = json::array();
  for (int b = 0; b < 64; ++b)
    if (mask >> b & 1) out.push_back(b + 1);
  return out;
}

json json_record(const ModificationRecord& m) {
  json out;
  out["kind"] = m.kind;
  out["variable"] = static_cast<std::int64_t>(m.var_index + 1);
  out["center"] = json_ivec(m.center);
  out["multiplicity"] = json_int(m.multiplicity);
  out["shift"] = json_int(m.shift);
  out["exceptional_class"] = json_ge(m.exceptional_class);
  out["note"] = m.note;
  return out;
}

json json_final(const ModelState& st) {
  json out;
  out["nvars"] = static_cast<std::int64_t>(st.ring.pres.nvars);
  out["grading"] = json_grading(st.ring.pres.grading);
  if (!st.ring.pres.relations.empty()) {
    out["relation"] = json_poly(st.ring.pres.relations[0]);
    out["relation_string"] = poly::poly_string(st.ring.pres.relations[0]);
  }
  out["fan_basis"] = json_imat(st.P);
  out["chamber"] = json_cone(st.eta);
  return out;
}

json attestation_echo(const CoxPresentation& pres) {
  json out;
  json gens = json::array();
  for (bool b : pres.gens_prime_attested) gens.push_back(b);
  out["generators_prime"] = gens;
  out["relation_prime"] = pres.relation_prime_attested;
  out["factorial_grading"] = pres.factorial_grading_attested;
  if (pres.factorial_grading_attested)
    out["note"] = "factorial grading attested by the input, not verified";
  return out;
}

// integer T with T * A = B, verified exactly; null when A lacks full row
// rank or no integer solution exists
std::optional<IMat> change_of_basis(const IMat& A, const IMat& B) {
  if (A.cols() != B.cols()) return std::nullopt;
  QMat At = to_rat(A).transpose();
  Eigen::FullPivLU<QMat> lu(At);
  if (lu.rank() != A.rows()) return std::nullopt;
  IMat T(B.rows(), A.rows());
  for (Index i = 0; i < B.rows(); ++i) {
    QVec rhs = to_rat(IVec(B.row(i)));
    QVec sol = lu.solve(rhs);
    QVec back = At * sol;
    for (Index c = 0; c < rhs.size(); ++c)
      if (back[c] != rhs[c]) return std::nullopt;
    for (Index c = 0; c < sol.size(); ++c) {
      if (sol[c].get_den() != 1) return std::nullopt;
      T(i, c) = sol[c].get_num();
    }
  }
  return T;
}

}  // namespace

InputDocument parse_input(const json& j) {
  if (!j.is_object()) fail_parse("input document must be a JSON object");
  InputDocument doc;

  const json& jg = need(j, "grading");
  Index rank = small_index(need(jg, "rank"), "grading rank");
  std::vector<Int> orders;
  if (jg.contains("torsion_orders")) {
    const json& jo = jg.at("torsion_orders");
    if (!jo.is_array()) fail_parse("torsion_orders must be an array");
    for (const json& e : jo) orders.push_back(parse_int(e));
  }
  std::vector<std::vector<Int>> frows, trows;
  if (jg.contains("free_rows")) frows = int_rows(jg.at("free_rows"), "free_rows");
  if (jg.contains("torsion_rows"))
    trows = int_rows(jg.at("torsion_rows"), "torsion_rows");
  if (static_cast<Index>(frows.size()) != rank)
    fail_parse("free_rows count must equal the grading rank");
  if (trows.size() != orders.size())
    fail_parse("torsion_rows count must equal the torsion order count");

  Index nvars = -1;
  auto learn = [&nvars](size_t n, const char* what) {
    if (nvars < 0)
      nvars = static_cast<Index>(n);
    else if (nvars != static_cast<Index>(n))
      fail_parse(std::string("inconsistent variable count in ") + what);
  };
  if (j.contains("nvars")) learn(static_cast<size_t>(small_index(j.at("nvars"), "nvars")), "nvars");
  for (const auto& r : frows) learn(r.size(), "free_rows");
  for (const auto& r : trows) learn(r.size(), "torsion_rows");

  std::vector<poly::Term> terms;
  if (j.contains("relation") && !j.at("relation").is_null()) {
    const json& jr = j.at("relation");
    if (!jr.is_array()) fail_parse("relation must be an array of terms");
    for (const json& t : jr) {
      poly::Term term;
      term.coeff = parse_rat(need(t, "coeff"));
      term.exps = parse_ivec(need(t, "exponents"));
      for (Index c = 0; c < term.exps.size(); ++c)
        if (term.exps[c] < 0) fail_parse("negative exponent in relation");
      learn(static_cast<size_t>(term.exps.size()), "relation");
      terms.push_back(std::move(term));
    }
  }
  if (nvars < 0)
    fail_parse("cannot determine the number of variables from the document");
  if (nvars > 64) fail_parse("more than 64 variables are not supported");

  IMat F(rank, nvars), T(static_cast<Index>(trows.size()), nvars);
  for (Index i = 0; i < rank; ++i)
    for (Index c = 0; c < nvars; ++c) F(i, c) = frows[static_cast<size_t>(i)][static_cast<size_t>(c)];
  for (size_t i = 0; i < trows.size(); ++i)
    for (Index c = 0; c < nvars; ++c) T(static_cast<Index>(i), c) = trows[i][static_cast<size_t>(c)];

  CoxPresentation& pres = doc.pres;
  pres.nvars = nvars;
  pres.grading = groups::make_grading(groups::make_group(rank, orders), F, T);
  if (!terms.empty()) pres.relations = {poly::make_poly(nvars, std::move(terms))};

  pres.gens_prime_attested.assign(static_cast<size_t>(nvars), false);
  if (j.contains("attestations") && !j.at("attestations").is_null()) {
    const json& a = j.at("attestations");
    if (!a.is_object()) fail_parse("attestations must be an object");
    for (const auto& [key, val] : a.items()) {
      if (key == "generators_prime") {
        if (val.is_boolean())
          pres.gens_prime_attested.assign(static_cast<size_t>(nvars),
                                          val.get<bool>());
        else if (val.is_array()) {
          if (static_cast<Index>(val.size()) != nvars)
            fail_parse("generators_prime array must have one flag per variable");
          size_t i = 0;
          for (const json& e : val)
            pres.gens_prime_attested[i++] = get_bool(e, "generators_prime entry");
        } else
          fail_parse("generators_prime must be a boolean or an array");
      } else if (key == "relation_prime")
        pres.relation_prime_attested = get_bool(val, "relation_prime");
      else if (key == "factorial_grading")
        pres.factorial_grading_attested = get_bool(val, "factorial_grading");
      else
        fail_parse("unknown attestation \"" + key + "\"");
    }
  }

  if (j.contains("bunch") && !j.at("bunch").is_null()) {
    doc.has_bunch = true;
    const json& b = j.at("bunch");
    if (!b.is_object()) fail_parse("bunch must be an object");
    const bool has_point = b.contains("chamber_point");
    const bool has_cones = b.contains("cones");
    if (has_point == has_cones)
      fail_parse("bunch must hold exactly one of chamber_point and cones");
    if (has_point) {
      QVec w = parse_qvec(b.at("chamber_point"));
      if (w.size() != rank)
        fail_parse("chamber_point length must equal the grading rank");
      doc.chamber_point = std::move(w);
    } else {
      const json& cs = b.at("cones");
      if (!cs.is_array()) fail_parse("bunch cones must be an array");
      for (const json& one : cs) {
        if (!one.is_array()) fail_parse("each bunch cone is a weight index set");
        std::vector<Index> set;
        for (const json& e : one) {
          Index v = small_index(e, "weight index");
          if (v < 1 || v > nvars)
            fail_parse("weight index " + std::to_string(v) +
                       " outside 1.." + std::to_string(nvars));
          set.push_back(v - 1);
        }
        if (set.empty()) fail_parse("empty weight index set");
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        doc.bunch_sets.push_back(std::move(set));
      }
    }
  }

  if (j.contains("fan") && !j.at("fan").is_null()) {
    const json& f = j.at("fan");
    doc.fan_basis = parse_imat(need(f, "basis"), nvars);
    if (doc.fan_basis->rows() < 1 || doc.fan_basis->rows() > nvars)
      fail_parse("fan basis must have between 1 and nvars rows");
  }

  if (j.contains("script") && !j.at("script").is_null())
    doc.script = parse_script(j.at("script"));
  return doc;
}

InputDocument parse_input_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail_parse(e.what());
  }
  return parse_input(j);
}

InputDocument load_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_parse("cannot open \"" + path + "\"");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_input_text(buf.str());
}

json serialize_input(const InputDocument& doc) {
  const CoxPresentation& pres = doc.pres;
  json j;
  j["format_version"] = kFormatVersion;
  j["grading"] = json_grading(pres.grading);
  if (!pres.relations.empty()) j["relation"] = json_poly(pres.relations[0]);
  if (doc.has_bunch) {
    json b;
    if (doc.chamber_point)
      b["chamber_point"] = json_qvec(*doc.chamber_point);
    else {
      json cs = json::array();
      for (const std::vector<Index>& set : doc.bunch_sets) {
        json one = json::array();
        for (Index i : set) one.push_back(static_cast<std::int64_t>(i + 1));
        cs.push_back(one);
      }
      b["cones"] = cs;
    }
    j["bunch"] = b;
  }
  json att;
  json gens = json::array();
  for (bool b : pres.gens_prime_attested) gens.push_back(b);
  att["generators_prime"] = gens;
  att["relation_prime"] = pres.relation_prime_attested;
  att["factorial_grading"] = pres.factorial_grading_attested;
  j["attestations"] = att;
  if (doc.fan_basis) {
    json f;
    f["basis"] = json_imat(*doc.fan_basis);
    j["fan"] = f;
  }
  if (!doc.script.empty()) {
    json steps = json::array();
    for (const ScriptStep& s : doc.script) {
      json one;
      if (s.kind == "subdivide_at")
        one["subdivide_at"] = json_ivec(s.center);
      else if (s.kind == "contract")
        one["contract"] = static_cast<std::int64_t>(s.var + 1);
      else
        one["retarget_chamber"] = json_qvec(s.target);
      steps.push_back(one);
    }
    j["script"] = steps;
  }
  return j;
}

std::vector<ScriptStep> parse_script(const json& j) {
  const json* arr = &j;
  if (j.is_object()) arr = &need(j, "steps");
  if (!arr->is_array()) fail_parse("script must be an array of steps");
  std::vector<ScriptStep> out;
  for (const json& s : *arr) {
    if (!s.is_object() || s.size() != 1)
      fail_parse("each script step is an object with exactly one key");
    ScriptStep step;
    for (const auto& [key, val] : s.items()) {
      if (key == "subdivide_at") {
        step.kind = "subdivide_at";
        step.center = parse_ivec(val);
      } else if (key == "contract") {
        step.kind = "contract";
        Index v = small_index(val, "contract index");
        if (v < 1) fail_parse("contract index is 1-based");
        step.var = v - 1;
      } else if (key == "retarget_chamber") {
        step.kind = "retarget_chamber";
        step.target = parse_qvec(val);
      } else
        fail_parse("unknown script step \"" + key + "\"");
    }
    out.push_back(std::move(step));
  }
  return out;
}

std::vector<ScriptStep> load_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_parse("cannot open \"" + path + "\"");
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    fail_parse(e.what());
  }
  return parse_script(j);
}

BunchedRing ring_of(const InputDocument& doc, bool toric, Index max_vars) {
  CoxPresentation pres = doc.pres;
  if (toric) {
    pres.relations.clear();
    pres.relation_prime_attested = false;
  }
  if (!doc.has_bunch)
    fail_validation("document carries no bunch data");
  if (doc.chamber_point) {
    bunch::OrbitConeSet S = bunch::orbit_cones(pres, false, max_vars);
    Cone lam = bunch::git_cone(S, *doc.chamber_point);
    return bunch::bunch_from_chamber(pres, lam, max_vars);
  }
  IMat F = groups::free_part(pres.grading);
  std::vector<Cone> phi;
  for (const std::vector<Index>& set : doc.bunch_sets) {
    IMat cols(F.rows(), static_cast<Index>(set.size()));
    for (size_t c = 0; c < set.size(); ++c)
      cols.col(static_cast<Index>(c)) = F.col(set[c]);
    phi.push_back(Cone::from_generators(cols));
  }
  return bunch::make_bunched_ring(pres, phi, max_vars);
}

ModelState model_of(const InputDocument& doc, Index max_vars) {
  BunchedRing B = ring_of(doc, false, max_vars);
  return modify::make_model(B, max_vars, doc.fan_basis, std::nullopt);
}

json report_analyze(const InputDocument& doc, bool toric, Index max_vars) {
  BunchedRing B = ring_of(doc, toric, max_vars);
  geometry::VarietyReport vr = geometry::variety_report(B);
  json r;
  r["format_version"] = kFormatVersion;
  r["command"] = "analyze";
  r["mode"] = B.pres.relations.empty() ? "toric" : "ring";
  r["nvars"] = static_cast<std::int64_t>(B.pres.nvars);
  r["class_group"] = json_group(B.pres.grading.target);
  if (!B.pres.relations.empty()) {
    r["relation"] = json_poly(B.pres.relations[0]);
    r["relation_string"] = poly::poly_string(B.pres.relations[0]);
  }

  json v;
  v["dim"] = static_cast<std::int64_t>(vr.dim);
  v["combinatorially_minimal"] = vr.combinatorially_minimal;
  json dc;
  dc["effective"] = json_cone(vr.cones.effective);
  dc["moving"] = json_cone(vr.cones.moving);
  dc["semiample"] = json_cone(vr.cones.semiample);
  v["cones"] = dc;
  json pic;
  json basis = json::array();
  for (Index c = 0; c < vr.picard.lattice.basis.cols(); ++c)
    basis.push_back(json_ivec(IVec(vr.picard.lattice.basis.col(c))));
  pic["lattice_basis"] = basis;
  pic["index"] = vr.picard_index ? json_int(*vr.picard_index) : json(nullptr);
  v["picard"] = pic;
  json can;
  can["canonical_class"] = json_ge(vr.canonical.canonical);
  can["anticanonical_class"] = json_ge(vr.canonical.anticanonical);
  can["q_gorenstein"] = vr.canonical.q_gorenstein;
  can["gorenstein"] = vr.canonical.gorenstein;
  can["q_fano"] = vr.canonical.q_fano;
  can["fano"] = vr.canonical.fano;
  v["canonical"] = can;
  json strata = json::array();
  for (const geometry::StratumInfo& st : vr.sing.strata) {
    json one;
    one["face"] = json_face(st.face);
    one["factorial"] = st.factorial;
    one["q_factorial"] = st.q_factorial;
    one["smooth"] = geometry::tri_string(st.smooth);
    strata.push_back(one);
  }
  json sm;
  sm["factorial"] = vr.sing.x_factorial;
  sm["q_factorial"] = vr.sing.x_q_factorial;
  sm["smooth"] = geometry::tri_string(vr.sing.x_smooth);
  sm["strata"] = strata;
  v["smoothness"] = sm;
  r["variety"] = v;

  json bn;
  json bc = json::array();
  for (const Cone& c : B.bunch) bc.push_back(json_cone(c));
  bn["cones"] = bc;
  bn["f_face_count"] = static_cast<std::int64_t>(B.orbits.faces.size());
  bn["orbit_cone_count"] = static_cast<std::int64_t>(B.orbits.cones.size());
  json rlv = json::array();
  for (uint64_t m : B.rlv) rlv.push_back(json_face(m));
  bn["relevant_faces"] = rlv;
  json cov = json::array();
  for (uint64_t m : B.cov) cov.push_back(json_face(m));
  bn["covering_collection"] = cov;
  r["bunch"] = bn;

  r["attestations"] = attestation_echo(B.pres);
  return r;
}

json report_gitfan(const InputDocument& doc, bool toric, Index max_vars) {
  bunch::validate_presentation(doc.pres);
  bunch::OrbitConeSet S = bunch::orbit_cones(doc.pres, toric, max_vars);
  bunch::ChamberFan cf = bunch::enumerate_chamber_fan(S);
  json r;
  r["format_version"] = kFormatVersion;
  r["command"] = "gitfan";
  r["mode"] = toric ? "toric" : "ring";
  r["source"] = cf.source;
  r["rank"] = static_cast<std::int64_t>(cf.k);
  r["chamber_count"] = static_cast<std::int64_t>(cf.chambers.size());
  json ch = json::array();
  for (const Cone& c : cf.chambers) ch.push_back(json_cone(c));
  r["chambers"] = ch;
  return r;
}

json report_modify(const InputDocument& doc,
                   const std::vector<ScriptStep>& steps, Index max_vars) {
  ModelState st = model_of(doc, max_vars);
  json recs = json::array();
  for (const ScriptStep& s : steps) {
    if (s.kind == "subdivide_at") {
      ModificationStep ms = modify::execute_blowup(st, s.center, max_vars);
      st = ms.state;
      recs.push_back(json_record(ms.record));
    } else if (s.kind == "contract") {
      std::vector<modify::ContractionCandidate> cands =
          modify::find_contractions(st, max_vars);
      bool done = false;
      for (const modify::ContractionCandidate& c : cands)
        if (c.i == s.var) {
          ModificationStep ms = modify::execute_contraction(st, c, max_vars);
          st = ms.state;
          recs.push_back(json_record(ms.record));
          done = true;
          break;
        }
      if (!done)
        fail_validation("variable T" + std::to_string(s.var + 1) +
                        " admits no contraction in the current chamber");
    } else {
      st = modify::retarget_chamber(st, s.target, max_vars);
      json one;
      one["kind"] = "retarget_chamber";
      one["target"] = json_qvec(s.target);
      one["note"] = "semiample chamber moved";
      recs.push_back(one);
    }
  }
  json r;
  r["format_version"] = kFormatVersion;
  r["command"] = "modify";
  r["steps"] = recs;
  r["final"] = json_final(st);
  return r;
}

json report_reduce(const InputDocument& doc, Index max_vars) {
  ModelState st = model_of(doc, max_vars);
  modify::ReduceResult rr = modify::reduce_to_minimal(st, max_vars);
  json r;
  r["format_version"] = kFormatVersion;
  r["command"] = "reduce";
  json recs = json::array();
  for (const ModificationRecord& m : rr.steps) recs.push_back(json_record(m));
  r["steps"] = recs;
  r["minimal"] = rr.minimal;
  if (!rr.diagnostic.empty()) r["diagnostic"] = rr.diagnostic;
  r["final"] = json_final(rr.final_state);
  return r;
}

json report_compare(const InputDocument& a, const InputDocument& b) {
  json r;
  r["format_version"] = kFormatVersion;
  r["command"] = "compare";
  const bool nv = a.pres.nvars == b.pres.nvars;
  r["nvars_equal"] = nv;

  IMat FA = groups::free_part(a.pres.grading);
  IMat FB = groups::free_part(b.pres.grading);
  bool lat_eq = false;
  json cert(nullptr);
  if (nv) {
    groups::HermiteBasis HA = groups::hermite_basis(IMat(FA.transpose()));
    groups::HermiteBasis HB = groups::hermite_basis(IMat(FB.transpose()));
    lat_eq = groups::lattice_eq(HA, HB);
    if (lat_eq)
      if (std::optional<IMat> T = change_of_basis(FA, FB)) cert = json_imat(*T);
  }
  const bool tors =
      nv && a.pres.grading.target.torsion_orders ==
                b.pres.grading.target.torsion_orders &&
      a.pres.grading.torsion_rows == b.pres.grading.torsion_rows;
  json gr;
  gr["free_lattice_equal"] = lat_eq;
  gr["torsion_identical"] = tors;
  gr["equivalent"] = lat_eq && tors;
  gr["certificate"] = cert;
  r["grading"] = gr;

  json fn;
  bool fan_ok = true;
  if (a.fan_basis && b.fan_basis) {
    fn["compared"] = true;
    bool feq = false;
    json fcert(nullptr);
    if (nv) {
      groups::HermiteBasis PA =
          groups::hermite_basis(IMat(a.fan_basis->transpose()));
      groups::HermiteBasis PB =
          groups::hermite_basis(IMat(b.fan_basis->transpose()));
      feq = groups::lattice_eq(PA, PB);
      if (feq)
        if (std::optional<IMat> S = change_of_basis(*a.fan_basis, *b.fan_basis))
          fcert = json_imat(*S);
    }
    fn["equivalent"] = feq;
    fn["certificate"] = fcert;
    fan_ok = feq;
  } else
    fn["compared"] = false;
  r["fan"] = fn;

  const bool ra = !a.pres.relations.empty(), rb = !b.pres.relations.empty();
  const bool rel =
      ra == rb && (!ra || poly::poly_eq(a.pres.relations[0], b.pres.relations[0]));
  r["relation_identical"] = rel;

  r["equivalent"] = nv && lat_eq && tors && fan_ok && rel;
  return r;
}

namespace {

std::string scalar_str(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string vec_str(const json& arr) {
  std::string out = "(";
  bool first = true;
  for (const json& e : arr) {
    if (!first) out += ", ";
    out += scalar_str(e);
    first = false;
  }
  return out + ")";
}

std::string cone_str(const json& c) {
  std::string out;
  if (c.at("rays").empty())
    out = "origin";
  else {
    out = "rays";
    for (const json& r : c.at("rays")) out += " " + vec_str(r);
  }
  if (!c.at("lineality").empty()) {
    out += ", lineality";
    for (const json& l : c.at("lineality")) out += " " + vec_str(l);
  }
  return out;
}

std::string face_str(const json& arr) {
  std::string out = "{";
  bool first = true;
  for (const json& e : arr) {
    if (!first) out += ", ";
    out += scalar_str(e);
    first = false;
  }
  return out + "}";
}

std::string group_str(const json& g) {
  std::string out = "Z^" + scalar_str(g.at("rank"));
  for (const json& d : g.at("torsion_orders"))
    out += " + Z/" + scalar_str(d);
  return out;
}

std::string yes_no(const json& b) { return b.get<bool>() ? "yes" : "no"; }

std::string class_str(const json& ge) {
  std::string out = vec_str(ge.at("free"));
  if (!ge.at("torsion").empty()) out += " torsion " + vec_str(ge.at("torsion"));
  return out;
}

void render_record(std::ostringstream& os, int n, const json& m) {
  os << "  step " << n << ": ";
  const std::string kind = m.at("kind").get<std::string>();
  if (kind == "retarget_chamber") {
    os << "retarget chamber to " << vec_str(m.at("target")) << "\n";
    return;
  }
  if (kind == "blowup")
    os << "blowup at " << vec_str(m.at("center")) << " -> new variable T"
       << scalar_str(m.at("variable"));
  else
    os << "contraction of T" << scalar_str(m.at("variable")) << " at center "
       << vec_str(m.at("center"));
  os << ", multiplicity " << scalar_str(m.at("multiplicity")) << ", shift "
     << scalar_str(m.at("shift")) << "\n";
}

void render_final(std::ostringstream& os, const json& f) {
  os << "final presentation: " << scalar_str(f.at("nvars")) << " variables\n";
  if (f.contains("relation_string"))
    os << "relation: " << f.at("relation_string").get<std::string>() << "\n";
  else
    os << "no relation\n";
  const json& g = f.at("grading");
  os << "class group: " << group_str(g) << "\n";
  os << "grading free rows:\n";
  for (const json& row : g.at("free_rows")) os << "  " << vec_str(row) << "\n";
  if (!g.at("torsion_rows").empty()) {
    os << "grading torsion rows:\n";
    for (const json& row : g.at("torsion_rows"))
      os << "  " << vec_str(row) << "\n";
  }
  os << "fan basis rows:\n";
  for (const json& row : f.at("fan_basis")) os << "  " << vec_str(row) << "\n";
  os << "chamber: " << cone_str(f.at("chamber")) << "\n";
}

}  // namespace

std::string render_text(const json& report) {
  std::ostringstream os;
  const std::string cmd = report.at("command").get<std::string>();
  if (cmd == "analyze") {
    os << "analysis of a " << report.at("mode").get<std::string>()
       << " presentation with " << scalar_str(report.at("nvars"))
       << " variables\n";
    os << "class group: " << group_str(report.at("class_group")) << "\n";
    if (report.contains("relation_string"))
      os << "relation: " << report.at("relation_string").get<std::string>()
         << "\n";
    else
      os << "no relation\n";
    const json& v = report.at("variety");
    os << "dimension: " << scalar_str(v.at("dim")) << "\n";
    os << "combinatorially minimal: " << yes_no(v.at("combinatorially_minimal"))
       << "\n";
    const json& dc = v.at("cones");
    os << "effective cone: " << cone_str(dc.at("effective")) << "\n";
    os << "moving cone: " << cone_str(dc.at("moving")) << "\n";
    os << "semiample cone: " << cone_str(dc.at("semiample")) << "\n";
    const json& pic = v.at("picard");
    os << "picard index: "
       << (pic.at("index").is_null() ? std::string("infinite")
                                     : scalar_str(pic.at("index")))
       << "\n";
    const json& can = v.at("canonical");
    os << "canonical class: " << class_str(can.at("canonical_class")) << "\n";
    os << "gorenstein: " << yes_no(can.at("gorenstein")) << ", q-gorenstein: "
       << yes_no(can.at("q_gorenstein")) << ", fano: " << yes_no(can.at("fano"))
       << ", q-fano: " << yes_no(can.at("q_fano")) << "\n";
    const json& sm = v.at("smoothness");
    os << "factorial: " << yes_no(sm.at("factorial")) << ", q-factorial: "
       << yes_no(sm.at("q_factorial"))
       << ", smooth: " << sm.at("smooth").get<std::string>() << "\n";
    os << "strata:\n";
    for (const json& st : sm.at("strata"))
      os << "  " << face_str(st.at("face")) << ": factorial "
         << yes_no(st.at("factorial")) << ", q-factorial "
         << yes_no(st.at("q_factorial")) << ", smooth "
         << st.at("smooth").get<std::string>() << "\n";
    const json& bn = report.at("bunch");
    os << "bunch: " << bn.at("cones").size() << " cone(s), "
       << scalar_str(bn.at("f_face_count")) << " F-faces, "
       << scalar_str(bn.at("orbit_cone_count")) << " orbit cones\n";
    os << "covering collection:";
    for (const json& f : bn.at("covering_collection")) os << " " << face_str(f);
    os << "\n";
    const json& att = report.at("attestations");
    if (att.contains("note"))
      os << "note: " << att.at("note").get<std::string>() << "\n";
  } else if (cmd == "gitfan") {
    os << "git fan (" << report.at("source").get<std::string>() << ") in rank "
       << scalar_str(report.at("rank")) << ": "
       << scalar_str(report.at("chamber_count")) << " chambers\n";
    int n = 1;
    for (const json& c : report.at("chambers"))
      os << "  chamber " << n++ << ": " << cone_str(c) << "\n";
  } else if (cmd == "modify" || cmd == "reduce") {
    os << (cmd == "modify" ? "modification run: " : "reduction run: ")
       << report.at("steps").size() << " step(s)\n";
    int n = 1;
    for (const json& m : report.at("steps")) render_record(os, n++, m);
    if (cmd == "reduce") {
      os << "combinatorially minimal: " << yes_no(report.at("minimal")) << "\n";
      if (report.contains("diagnostic"))
        os << "diagnostic: " << report.at("diagnostic").get<std::string>()
           << "\n";
    }
    render_final(os, report.at("final"));
  } else if (cmd == "compare") {
    os << "equivalent: " << yes_no(report.at("equivalent")) << "\n";
    os << "variable counts equal: " << yes_no(report.at("nvars_equal")) << "\n";
    const json& gr = report.at("grading");
    os << "grading free row lattices equal: "
       << yes_no(gr.at("free_lattice_equal")) << "\n";
    os << "grading torsion identical: " << yes_no(gr.at("torsion_identical"))
       << "\n";
    if (!gr.at("certificate").is_null()) {
      os << "grading change of basis:\n";
      for (const json& row : gr.at("certificate"))
        os << "  " << vec_str(row) << "\n";
    }
    const json& fn = report.at("fan");
    if (fn.at("compared").get<bool>()) {
      os << "fan bases equivalent: " << yes_no(fn.at("equivalent")) << "\n";
      if (!fn.at("certificate").is_null()) {
        os << "fan change of basis:\n";
        for (const json& row : fn.at("certificate"))
          os << "  " << vec_str(row) << "\n";
      }
    } else
      os << "fan bases: not compared\n";
    os << "relation identical: " << yes_no(report.at("relation_identical"))
       << "\n";
  } else
    os << report.dump(2) << "\n";
  return os.str();
}

}  // namespace bunched::io
