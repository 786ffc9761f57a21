#pragma once

#include <json.hpp>

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "translates.hpp"

namespace framelab {

using ojson = nlohmann::ordered_json;

// Runtime-dispatched family and instance values: one alternative per
// (case, field) combination.
using AnyFamily = std::variant<VectorFamily<double>, VectorFamily<cplx>,
                               AlgebraFamily<double>, AlgebraFamily<cplx>,
                               ModuleFamily<double>, ModuleFamily<cplx>>;

using AnyInstance = std::variant<TranslateInstance<VectorFamily<double>>,
                                 TranslateInstance<VectorFamily<cplx>>,
                                 TranslateInstance<AlgebraFamily<double>>,
                                 TranslateInstance<AlgebraFamily<cplx>>,
                                 TranslateInstance<ModuleFamily<double>>,
                                 TranslateInstance<ModuleFamily<cplx>>>;

enum class CaseTag { Hilbert, CStar, Module };

inline const char* case_name(CaseTag c) {
  switch (c) {
    case CaseTag::Hilbert: return "hilbert";
    case CaseTag::CStar: return "cstar";
    case CaseTag::Module: return "module";
  }
  return "?";
}

inline CaseTag parse_case(const std::string& s) {
  if (s == "hilbert") return CaseTag::Hilbert;
  if (s == "cstar") return CaseTag::CStar;
  if (s == "module") return CaseTag::Module;
  throw parse_error("unknown case '" + s + "' (expected hilbert, cstar or module)");
}

namespace jsonio {

// Scalars: real numbers serialize as JSON numbers, complex ones as [re, im].
inline ojson scalar_to_json(double x) { return x; }
inline ojson scalar_to_json(const cplx& x) { return ojson::array({x.real(), x.imag()}); }

template <class T>
T scalar_from_json(const ojson& j) {
  if constexpr (is_complex_v<T>) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
      return cplx(j[0].get<double>(), j[1].get<double>());
    throw parse_error("expected a number or [re, im] pair, got " + j.dump());
  } else {
    if (!j.is_number()) throw parse_error("expected a real number, got " + j.dump());
    return j.get<double>();
  }
}

template <class T>
ojson matrix_to_json(const Mat<T>& m) {
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class T>
Mat<T> matrix_from_json(const ojson& j, int rows, int cols, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw parse_error(what + ": expected " + std::to_string(rows) + " rows");
  Mat<T> m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
      throw parse_error(what + ": row " + std::to_string(i) + " must have " +
                        std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c) m(i, c) = scalar_from_json<T>(j[i][c]);
  }
  return m;
}

inline const ojson& member(const ojson& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw parse_error(std::string("missing key '") + key + "'");
  return j.at(key);
}

inline int int_member(const ojson& j, const char* key) {
  const ojson& v = member(j, key);
  if (!v.is_number_integer()) throw parse_error(std::string("key '") + key + "' must be an integer");
  return v.get<int>();
}

inline DiscreteMeasureSpace space_from_json(const ojson& j, int points) {
  if (!j.contains("weights")) return DiscreteMeasureSpace::counting(points);
  const ojson& w = j.at("weights");
  if (!w.is_array() || static_cast<int>(w.size()) != points)
    throw parse_error("weights: expected " + std::to_string(points) + " entries");
  VecR weights(points);
  for (int i = 0; i < points; ++i) {
    if (!w[i].is_number()) throw parse_error("weights: entries must be numbers");
    weights[i] = w[i].get<double>();
  }
  return DiscreteMeasureSpace(std::move(weights));
}

inline ojson weights_to_json(const DiscreteMeasureSpace& space) {
  ojson w = ojson::array();
  for (int i = 0; i < space.size(); ++i) w.push_back(space.weight(i));
  return w;
}

}  // namespace jsonio

// -- Families ---------------------------------------------------------------

template <class T>
ojson family_to_json(const VectorFamily<T>& fam) {
  ojson j;
  j["case"] = "hilbert";
  j["field"] = field_name(field_of_v<T>);
  j["n"] = fam.dim();
  j["weights"] = jsonio::weights_to_json(fam.space());
  j["vectors"] = jsonio::matrix_to_json<T>(fam.vectors());
  return j;
}

template <class T>
ojson family_to_json(const AlgebraFamily<T>& fam) {
  ojson j;
  j["case"] = "cstar";
  j["field"] = field_name(field_of_v<T>);
  j["signature"] = fam.signature().sizes();
  j["weights"] = jsonio::weights_to_json(fam.space());
  ojson elems = ojson::array();
  for (int i = 0; i < fam.points(); ++i) {
    ojson blocks = ojson::array();
    for (int b = 0; b < fam.signature().blocks(); ++b)
      blocks.push_back(jsonio::matrix_to_json<T>(fam.element(i).block(b)));
    elems.push_back(std::move(blocks));
  }
  j["elements"] = std::move(elems);
  return j;
}

template <class T>
ojson family_to_json(const ModuleFamily<T>& fam) {
  ojson j;
  j["case"] = "module";
  j["field"] = field_name(field_of_v<T>);
  ojson summands = ojson::array();
  for (auto [m, k] : fam.signature().pairs()) summands.push_back(ojson::array({m, k}));
  j["summands"] = std::move(summands);
  j["weights"] = jsonio::weights_to_json(fam.space());
  ojson elems = ojson::array();
  for (int i = 0; i < fam.points(); ++i) {
    ojson blocks = ojson::array();
    for (int b = 0; b < fam.signature().summands(); ++b)
      blocks.push_back(jsonio::matrix_to_json<T>(fam.element(i).block(b)));
    elems.push_back(std::move(blocks));
  }
  j["elements"] = std::move(elems);
  return j;
}

inline ojson family_to_json(const AnyFamily& fam) {
  return std::visit([](const auto& f) { return family_to_json(f); }, fam);
}

namespace jsonio {

template <class T>
VectorFamily<T> vector_family_from_json(const ojson& j) {
  int n = int_member(j, "n");
  if (n < 1) throw parse_error("n must be at least 1");
  const ojson& vectors = member(j, "vectors");
  if (!vectors.is_array() || vectors.empty())
    throw parse_error("vectors: expected a non-empty array");
  int points = static_cast<int>(vectors.size());
  Mat<T> m = matrix_from_json<T>(vectors, points, n, "vectors");
  return VectorFamily<T>(space_from_json(j, points), std::move(m));
}

inline AlgebraSignature signature_from_json(const ojson& j) {
  const ojson& sig = member(j, "signature");
  if (!sig.is_array() || sig.empty()) throw parse_error("signature: expected a non-empty array");
  std::vector<int> sizes;
  for (const auto& v : sig) {
    if (!v.is_number_integer()) throw parse_error("signature: entries must be integers");
    sizes.push_back(v.get<int>());
  }
  return AlgebraSignature(std::move(sizes));
}

template <class T>
AlgebraFamily<T> algebra_family_from_json(const ojson& j) {
  AlgebraSignature sig = signature_from_json(j);
  const ojson& elems = member(j, "elements");
  if (!elems.is_array() || elems.empty())
    throw parse_error("elements: expected a non-empty array");
  int points = static_cast<int>(elems.size());
  std::vector<AlgebraElement<T>> elements;
  for (int i = 0; i < points; ++i) {
    const ojson& blocks = elems[i];
    if (!blocks.is_array() || static_cast<int>(blocks.size()) != sig.blocks())
      throw parse_error("elements[" + std::to_string(i) + "]: expected " +
                        std::to_string(sig.blocks()) + " blocks");
    std::vector<Mat<T>> mats;
    for (int b = 0; b < sig.blocks(); ++b)
      mats.push_back(matrix_from_json<T>(blocks[b], sig.size(b), sig.size(b),
                                         "elements[" + std::to_string(i) + "][" +
                                             std::to_string(b) + "]"));
    elements.push_back(AlgebraElement<T>(sig, std::move(mats)));
  }
  return AlgebraFamily<T>(space_from_json(j, points), sig, std::move(elements));
}

inline ModuleSignature module_signature_from_json(const ojson& j) {
  const ojson& summands = member(j, "summands");
  if (!summands.is_array() || summands.empty())
    throw parse_error("summands: expected a non-empty array");
  std::vector<std::pair<int, int>> pairs;
  for (const auto& v : summands) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
        !v[1].is_number_integer())
      throw parse_error("summands: entries must be [m, k] integer pairs");
    pairs.emplace_back(v[0].get<int>(), v[1].get<int>());
  }
  return ModuleSignature(std::move(pairs));
}

template <class T>
ModuleFamily<T> module_family_from_json(const ojson& j) {
  ModuleSignature sig = module_signature_from_json(j);
  const ojson& elems = member(j, "elements");
  if (!elems.is_array() || elems.empty())
    throw parse_error("elements: expected a non-empty array");
  int points = static_cast<int>(elems.size());
  std::vector<ModuleElement<T>> elements;
  for (int i = 0; i < points; ++i) {
    const ojson& blocks = elems[i];
    if (!blocks.is_array() || static_cast<int>(blocks.size()) != sig.summands())
      throw parse_error("elements[" + std::to_string(i) + "]: expected " +
                        std::to_string(sig.summands()) + " blocks");
    std::vector<Mat<T>> mats;
    for (int b = 0; b < sig.summands(); ++b)
      mats.push_back(matrix_from_json<T>(blocks[b], sig.rows(b), sig.cols(b),
                                         "elements[" + std::to_string(i) + "][" +
                                             std::to_string(b) + "]"));
    elements.push_back(ModuleElement<T>(sig, std::move(mats)));
  }
  return ModuleFamily<T>(space_from_json(j, points), sig, std::move(elements));
}

}  // namespace jsonio

inline AnyFamily parse_family(const ojson& j) {
  if (!j.is_object()) throw parse_error("family: expected a JSON object");
  CaseTag tag = parse_case(jsonio::member(j, "case").get<std::string>());
  Field field = parse_field(jsonio::member(j, "field").get<std::string>());
  try {
    switch (tag) {
      case CaseTag::Hilbert:
        if (field == Field::Real) return jsonio::vector_family_from_json<double>(j);
        return jsonio::vector_family_from_json<cplx>(j);
      case CaseTag::CStar:
        if (field == Field::Real) return jsonio::algebra_family_from_json<double>(j);
        return jsonio::algebra_family_from_json<cplx>(j);
      case CaseTag::Module:
        if (field == Field::Real) return jsonio::module_family_from_json<double>(j);
        return jsonio::module_family_from_json<cplx>(j);
    }
  } catch (const ojson::exception& ex) {
    throw parse_error(std::string("family: ") + ex.what());
  }
  throw parse_error("family: unreachable case");
}

// -- Instances --------------------------------------------------------------

template <class Fam>
ojson instance_to_json(const TranslateInstance<Fam>& inst) {
  // The family serializer already stamps case and field; reuse its values.
  ojson first = family_to_json(inst.translate(0));
  ojson j;
  j["case"] = first.at("case");
  j["field"] = first.at("field");
  j["l"] = inst.count();
  ojson u = ojson::array();
  ojson a = ojson::array();
  for (int i = 0; i < inst.count(); ++i) {
    u.push_back(family_to_json(inst.translate(i)));
    a.push_back(family_to_json(inst.frame(i)));
  }
  j["U"] = std::move(u);
  j["A"] = std::move(a);
  return j;
}

inline ojson instance_to_json(const AnyInstance& inst) {
  return std::visit([](const auto& i) { return instance_to_json(i); }, inst);
}

namespace jsonio {

template <class Fam, class Parse>
TranslateInstance<Fam> instance_from_json_typed(const ojson& j, Parse parse) {
  int l = int_member(j, "l");
  const ojson& u = member(j, "U");
  const ojson& a = member(j, "A");
  if (!u.is_array() || static_cast<int>(u.size()) != l)
    throw parse_error("U: expected " + std::to_string(l) + " families");
  if (!a.is_array() || static_cast<int>(a.size()) != l)
    throw parse_error("A: expected " + std::to_string(l) + " families");
  std::vector<Fam> translates, frames;
  for (int i = 0; i < l; ++i) translates.push_back(parse(u[i]));
  for (int i = 0; i < l; ++i) frames.push_back(parse(a[i]));
  return TranslateInstance<Fam>(std::move(translates), std::move(frames));
}

}  // namespace jsonio

inline AnyInstance parse_instance(const ojson& j) {
  if (!j.is_object()) throw parse_error("instance: expected a JSON object");
  CaseTag tag = parse_case(jsonio::member(j, "case").get<std::string>());
  Field field = parse_field(jsonio::member(j, "field").get<std::string>());
  try {
    switch (tag) {
      case CaseTag::Hilbert:
        if (field == Field::Real)
          return jsonio::instance_from_json_typed<VectorFamily<double>>(
              j, [](const ojson& f) { return jsonio::vector_family_from_json<double>(f); });
        return jsonio::instance_from_json_typed<VectorFamily<cplx>>(
            j, [](const ojson& f) { return jsonio::vector_family_from_json<cplx>(f); });
      case CaseTag::CStar:
        if (field == Field::Real)
          return jsonio::instance_from_json_typed<AlgebraFamily<double>>(
              j, [](const ojson& f) { return jsonio::algebra_family_from_json<double>(f); });
        return jsonio::instance_from_json_typed<AlgebraFamily<cplx>>(
            j, [](const ojson& f) { return jsonio::algebra_family_from_json<cplx>(f); });
      case CaseTag::Module:
        if (field == Field::Real)
          return jsonio::instance_from_json_typed<ModuleFamily<double>>(
              j, [](const ojson& f) { return jsonio::module_family_from_json<double>(f); });
        return jsonio::instance_from_json_typed<ModuleFamily<cplx>>(
            j, [](const ojson& f) { return jsonio::module_family_from_json<cplx>(f); });
    }
  } catch (const ojson::exception& ex) {
    throw parse_error(std::string("instance: ") + ex.what());
  }
  throw parse_error("instance: unreachable case");
}

// -- Reports ----------------------------------------------------------------

inline ojson classification_to_json(const FrameClassification& cls) {
  ojson j;
  j["kind"] = frame_kind_name(cls.kind);
  j["lower"] = cls.lower;
  j["upper"] = cls.upper;
  j["margin"] = cls.margin;
  if (cls.is_tight())
    j["tight_constant"] = cls.tight_constant;
  else
    j["tight_constant"] = nullptr;
  return j;
}

inline ojson membership_report_to_json(const MembershipReport& report) {
  ojson j;
  j["is_member"] = report.is_member;
  ojson per = ojson::array();
  for (std::size_t e = 0; e < report.per_index.size(); ++e) {
    ojson entry;
    entry["index"] = static_cast<int>(e + 1);
    entry["is_member"] = report.per_index[e].is_member;
    entry["margin"] = report.per_index[e].margin;
    entry["dets"] = report.per_index[e].dets;
    per.push_back(std::move(entry));
  }
  j["per_index"] = std::move(per);
  return j;
}

inline ojson biconditional_report_to_json(const BiconditionalReport& report) {
  ojson j;
  j["samples"] = report.samples;
  j["agreements"] = report.agreements;
  j["disagreements"] = report.disagreements;
  j["excluded"] = report.excluded;
  j["near_zero_union"] = report.near_zero_union;
  j["near_zero_simultaneous"] = report.near_zero_simultaneous;
  j["all_agree"] = report.all_agree();
  ojson ces = ojson::array();
  for (const auto& ce : report.counterexamples) {
    ojson c;
    c["sample_index"] = ce.sample_index;
    c["index"] = ce.e + 1;
    c["tuple"] = ce.tuple;
    c["frame_by_margin"] = ce.frame_by_margin;
    c["positive_by_dets"] = ce.positive_by_dets;
    c["margin"] = ce.margin_eff;
    c["min_det"] = ce.min_det;
    ces.push_back(std::move(c));
  }
  j["counterexamples"] = std::move(ces);
  return j;
}

inline ojson measure_estimate_to_json(const MeasureEstimate& est) {
  ojson j;
  j["samples"] = est.samples;
  j["failures"] = est.failures;
  j["fraction"] = est.fraction;
  j["wilson_low"] = est.wilson_low;
  j["wilson_high"] = est.wilson_high;
  j["radius"] = est.radius;
  j["seed"] = est.seed;
  return j;
}

inline ojson interpolated_blocks_to_json(const std::vector<InterpolatedBlock>& blocks) {
  ojson arr = ojson::array();
  for (const auto& blk : blocks) {
    ojson b;
    b["block_dim"] = blk.block_dim;
    b["degree"] = blk.degree;
    b["validation_error"] = blk.validation_error;
    ojson terms = ojson::array();
    for (int t = 0; t < blk.poly.terms(); ++t) {
      if (blk.poly.coefficient(t) == 0.0) continue;
      ojson term;
      term["alpha"] = blk.poly.exponent(t);
      term["coefficient"] = blk.poly.coefficient(t);
      terms.push_back(std::move(term));
    }
    b["terms"] = std::move(terms);
    arr.push_back(std::move(b));
  }
  return arr;
}

inline ojson sampled_report_to_json(const ModuleSampledReport& report) {
  ojson j;
  j["note"] = "empirical evidence from finitely many probes, not a proof";
  j["probes"] = report.probes;
  j["violations"] = report.violations;
  j["bound_lower"] = report.bound_lower;
  j["bound_upper"] = report.bound_upper;
  j["est_lower"] = report.est_lower;
  j["est_upper"] = report.est_upper;
  j["worst_lower_slack"] = report.worst_lower_slack;
  j["worst_upper_slack"] = report.worst_upper_slack;
  j["frame_verdict"] = report.frame_verdict;
  j["blockwise_kind"] = frame_kind_name(report.blockwise_kind);
  j["agrees_blockwise"] = report.agrees_blockwise();
  return j;
}

inline void write_slice_csv(std::ostream& os, const SliceGridResult& result) {
  os << "ci,cj,min_value,verdict\n";
  for (const SliceCell& cell : result.cells) {
    os << cell.ci << ',' << cell.cj << ',' << cell.min_det << ','
       << (cell.is_member ? "in" : "out") << '\n';
  }
}

inline ojson slice_to_json(const SliceGridResult& result) {
  ojson j;
  j["axis_i"] = result.axis_i + 1;
  j["axis_j"] = result.axis_j + 1;
  j["ni"] = result.grid.ni;
  j["nj"] = result.grid.nj;
  ojson cells = ojson::array();
  for (const SliceCell& cell : result.cells) {
    ojson c;
    c["ci"] = cell.ci;
    c["cj"] = cell.cj;
    c["min_value"] = cell.min_det;
    c["verdict"] = cell.is_member ? "in" : "out";
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  return j;
}

}  // namespace framelab
