// Command-line front end: generate families and translate instances, classify
// them, query hypersurface membership, verify the determinant biconditional,
// estimate failure measure, interpolate determinant polynomials, and export
// planar slices. All randomness is seeded, so identical invocations produce
// identical output (pass --deterministic to suppress the report timestamp).

#include <CLI11.hpp>

#include <framelab/framelab.hpp>

#include <cctype>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace framelab;

namespace {

std::string timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ojson report_shell(const std::string& command, bool deterministic) {
  ojson j;
  j["tool"] = "framelab";
  j["command"] = command;
  if (!deterministic) j["timestamp"] = timestamp_utc();
  return j;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw parse_error("cannot open output file: " + path);
  f << text;
  if (!f) throw parse_error("failed to write output file: " + path);
}

void emit_report(const std::string& path, const ojson& j) {
  write_output(path, j.dump(2) + "\n");
}

ojson load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw parse_error("cannot open input file: " + path);
  try {
    return ojson::parse(f);
  } catch (const ojson::exception& ex) {
    throw parse_error("invalid JSON in " + path + ": " + ex.what());
  }
}

double parse_double_strict(const std::string& s) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw parse_error("cannot parse number: '" + s + "'");
  }
  if (pos != s.size()) throw parse_error("trailing characters in number: '" + s + "'");
  return value;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  return parts;
}

// Accepts "1.5", "2i", "-i", "1+2i", "3-0.5i", "1e-3+2e-2i".
cplx parse_complex_token(const std::string& raw) {
  std::string s = trim(raw);
  if (s.empty()) throw parse_error("empty tuple entry");
  char last = s.back();
  if (last != 'i' && last != 'I') return cplx(parse_double_strict(s), 0.0);
  std::string body = s.substr(0, s.size() - 1);
  std::size_t cut = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      cut = k;
      break;
    }
  }
  auto imag_part = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_double_strict(t);
  };
  if (cut == std::string::npos) return cplx(0.0, imag_part(body));
  return cplx(parse_double_strict(body.substr(0, cut)), imag_part(body.substr(cut)));
}

std::vector<cplx> parse_tuple(const std::string& s) {
  std::vector<cplx> out;
  for (const std::string& tok : split(s, ',')) out.push_back(parse_complex_token(tok));
  return out;
}

template <class T>
std::vector<T> narrow_tuple(const std::vector<cplx>& c) {
  if constexpr (is_complex_v<T>) {
    return c;
  } else {
    std::vector<double> out;
    out.reserve(c.size());
    for (const cplx& z : c) {
      if (z.imag() != 0.0)
        throw parse_error("tuple entry has a nonzero imaginary part but the instance is real");
      out.push_back(z.real());
    }
    return out;
  }
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (const std::string& tok : split(s, ',')) {
    double v = parse_double_strict(trim(tok));
    int k = static_cast<int>(v);
    if (v != k) throw parse_error("expected an integer, got '" + tok + "'");
    out.push_back(k);
  }
  return out;
}

std::vector<std::pair<int, int>> parse_summands(const std::string& s) {
  std::vector<std::pair<int, int>> out;
  for (const std::string& tok : split(s, ',')) {
    auto parts = split(trim(tok), 'x');
    if (parts.size() != 2)
      throw parse_error("summand must look like MxK, got '" + tok + "'");
    auto lo = parse_int_list(parts[0]);
    auto hi = parse_int_list(parts[1]);
    out.emplace_back(lo.at(0), hi.at(0));
  }
  return out;
}

struct GenOptions {
  std::string case_name = "hilbert";
  std::string field_name = "R";
  int n = 2;
  int points = 6;
  int l = 0;
  std::string signature = "2";
  std::string summands = "1x2";
  std::uint64_t seed = 1;
  double margin = 1e-6;
  double tight_a = 1.0;
  bool want_frame = false;
  bool want_tight = false;
  bool want_doubled = false;
  bool random_weights = false;
};

DiscreteMeasureSpace gen_space(const GenOptions& opt) {
  if (opt.random_weights)
    return DiscreteMeasureSpace::random(child_seed(opt.seed, 0x7370616365ULL), opt.points);
  return DiscreteMeasureSpace::counting(opt.points);
}

template <class T>
AnyFamily gen_family_typed(const GenOptions& opt, CaseTag tag) {
  DiscreteMeasureSpace space = gen_space(opt);
  switch (tag) {
    case CaseTag::Hilbert:
      if (opt.want_tight)
        return random_tight_frame<T>(opt.seed, space, opt.n, opt.tight_a);
      if (opt.want_frame)
        return random_frame<T>(opt.seed, space, opt.n, kDefaultTol, opt.margin);
      return random_bessel<T>(opt.seed, space, opt.n);
    case CaseTag::CStar: {
      if (opt.want_tight)
        throw unsupported_error("gen: --tight is only available for --case hilbert");
      AlgebraSignature sig(parse_int_list(opt.signature));
      if (opt.want_frame)
        return random_cstar_frame<T>(opt.seed, space, sig, kDefaultTol, opt.margin);
      return random_cstar_family<T>(opt.seed, space, sig);
    }
    case CaseTag::Module: {
      if (opt.want_tight)
        throw unsupported_error("gen: --tight is only available for --case hilbert");
      ModuleSignature sig(parse_summands(opt.summands));
      if (opt.want_frame)
        return random_module_frame<T>(opt.seed, space, sig, kDefaultTol, opt.margin);
      return random_module_family<T>(opt.seed, space, sig);
    }
  }
  throw contract_error("gen: unreachable case tag");
}

template <class T>
AnyInstance gen_instance_typed(const GenOptions& opt, CaseTag tag) {
  DiscreteMeasureSpace space = gen_space(opt);
  if (opt.want_doubled) {
    switch (tag) {
      case CaseTag::Hilbert: {
        std::vector<VectorFamily<T>> u;
        for (int i = 0; i < opt.l; ++i)
          u.push_back(random_frame<T>(child_seed(opt.seed, 3000 + i), space, opt.n,
                                      kDefaultTol, opt.margin));
        return doubled_translate_instance(std::move(u));
      }
      case CaseTag::CStar: {
        AlgebraSignature sig(parse_int_list(opt.signature));
        std::vector<AlgebraFamily<T>> u;
        for (int i = 0; i < opt.l; ++i)
          u.push_back(random_cstar_frame<T>(child_seed(opt.seed, 3000 + i), space, sig,
                                            kDefaultTol, opt.margin));
        return doubled_translate_instance(std::move(u));
      }
      case CaseTag::Module: {
        ModuleSignature sig(parse_summands(opt.summands));
        std::vector<ModuleFamily<T>> u;
        for (int i = 0; i < opt.l; ++i)
          u.push_back(random_module_frame<T>(child_seed(opt.seed, 3000 + i), space, sig,
                                             kDefaultTol, opt.margin));
        return doubled_translate_instance(std::move(u));
      }
    }
  }
  switch (tag) {
    case CaseTag::Hilbert:
      return random_hilbert_instance<T>(opt.seed, opt.l, space, opt.n, opt.margin);
    case CaseTag::CStar:
      return random_cstar_instance<T>(opt.seed, opt.l, space,
                                      AlgebraSignature(parse_int_list(opt.signature)),
                                      opt.margin);
    case CaseTag::Module:
      return random_module_instance<T>(opt.seed, opt.l, space,
                                       ModuleSignature(parse_summands(opt.summands)),
                                       opt.margin);
  }
  throw contract_error("gen: unreachable case tag");
}

int run_gen(const GenOptions& opt, const std::string& out) {
  CaseTag tag = parse_case(opt.case_name);
  Field field = parse_field(opt.field_name);
  ojson doc;
  std::string summary;
  if (opt.l > 0) {
    AnyInstance inst = field == Field::Real ? gen_instance_typed<double>(opt, tag)
                                            : gen_instance_typed<cplx>(opt, tag);
    doc = instance_to_json(inst);
    summary = "instance: case=" + std::string(case_name(tag)) +
              " field=" + field_name(field) + " l=" + std::to_string(opt.l);
  } else {
    AnyFamily fam = field == Field::Real ? gen_family_typed<double>(opt, tag)
                                         : gen_family_typed<cplx>(opt, tag);
    doc = family_to_json(fam);
    FrameClassification cls =
        std::visit([](const auto& f) { return classify_any(f); }, fam);
    summary = "family: case=" + std::string(case_name(tag)) +
              " field=" + field_name(field) + " kind=" + frame_kind_name(cls.kind);
  }
  write_output(out, doc.dump(2) + "\n");
  std::cerr << summary << "\n";
  return 0;
}

int run_classify(const std::string& input, double tol, int probes, std::uint64_t seed,
                 const std::string& out, bool deterministic) {
  AnyFamily fam = parse_family(load_json_file(input));
  ojson j = report_shell("classify", deterministic);
  j["config"] = {{"input", input}, {"tol", tol}};
  FrameClassification cls =
      std::visit([&](const auto& f) { return classify_any(f, tol); }, fam);
  j["classification"] = classification_to_json(cls);
  if (probes > 0) {
    j["config"]["probes"] = probes;
    j["config"]["seed"] = seed;
    if (std::holds_alternative<ModuleFamily<double>>(fam)) {
      j["sampled"] = sampled_report_to_json(classify_module_sampled(
          std::get<ModuleFamily<double>>(fam), probes, seed, tol));
    } else if (std::holds_alternative<ModuleFamily<cplx>>(fam)) {
      j["sampled"] = sampled_report_to_json(classify_module_sampled(
          std::get<ModuleFamily<cplx>>(fam), probes, seed, tol));
    } else {
      throw unsupported_error("classify: --probes is only available for module families");
    }
  }
  emit_report(out, j);
  std::cerr << "kind: " << frame_kind_name(cls.kind) << " bounds: [" << cls.lower << ", "
            << cls.upper << "]\n";
  return 0;
}

int run_membership(const std::string& input, const std::string& tuple, double tol,
                   const std::string& out, bool deterministic) {
  AnyInstance any = parse_instance(load_json_file(input));
  std::vector<cplx> raw = parse_tuple(tuple);
  ojson j = report_shell("membership", deterministic);
  j["config"] = {{"input", input}, {"c", tuple}, {"tol", tol}};
  bool member = false;
  std::visit(
      [&]<class Fam>(const TranslateInstance<Fam>& inst) {
        using T = typename Fam::scalar_type;
        std::vector<T> c = narrow_tuple<T>(raw);
        MembershipReport report = intersection_membership(inst, std::span<const T>(c), tol);
        member = report.is_member;
        j["membership"] = membership_report_to_json(report);
      },
      any);
  emit_report(out, j);
  std::cerr << "member of every complement: " << (member ? "yes" : "no") << "\n";
  return 0;
}

int run_verify(const std::string& input, long long samples, std::uint64_t seed,
               double radius, bool gaussian, double tol, double band,
               const std::string& out, bool deterministic) {
  AnyInstance any = parse_instance(load_json_file(input));
  ojson j = report_shell("verify", deterministic);
  j["config"] = {{"input", input}, {"samples", samples},   {"seed", seed},
                 {"radius", radius}, {"gaussian", gaussian}, {"tol", tol},
                 {"band", band}};
  long long disagreements = 0;
  std::visit(
      [&]<class Fam>(const TranslateInstance<Fam>& inst) {
        SamplerSpec sampler{seed, radius, gaussian};
        BiconditionalReport report = verify_biconditional(inst, sampler, samples, tol, band);
        disagreements = report.disagreements;
        j["biconditional"] = biconditional_report_to_json(report);
      },
      any);
  emit_report(out, j);
  std::cerr << "samples: " << samples << " disagreements: " << disagreements << "\n";
  return disagreements > 0 ? 1 : 0;
}

int run_measure(const std::string& input, long long samples, std::uint64_t seed,
                double radius, double tol, const std::string& out, bool deterministic) {
  AnyInstance any = parse_instance(load_json_file(input));
  ojson j = report_shell("measure", deterministic);
  j["config"] = {{"input", input},
                 {"samples", samples},
                 {"seed", seed},
                 {"radius", radius},
                 {"tol", tol}};
  double fraction = 0.0, hi = 0.0;
  std::visit(
      [&]<class Fam>(const TranslateInstance<Fam>& inst) {
        MeasureEstimate est = failure_measure(inst, radius, samples, seed, tol);
        fraction = est.fraction;
        hi = est.wilson_high;
        j["measure"] = measure_estimate_to_json(est);
      },
      any);
  emit_report(out, j);
  std::cerr << "failure fraction: " << fraction << " (95% upper bound " << hi << ")\n";
  return 0;
}

int run_interp(const std::string& input, int e, int degree, double radius,
               std::uint64_t seed, const std::string& out, bool deterministic) {
  AnyInstance any = parse_instance(load_json_file(input));
  ojson j = report_shell("interp", deterministic);
  j["config"] = {{"input", input}, {"e", e},       {"degree", degree},
                 {"radius", radius}, {"seed", seed}};
  double worst = 0.0;
  std::visit(
      [&]<class Fam>(const TranslateInstance<Fam>& inst) {
        InterpOptions opts;
        opts.degree = degree;
        opts.radius = radius;
        if (seed != 0) opts.seed = seed;
        std::vector<InterpolatedBlock> blocks = interpolate_pe(inst, e - 1, opts);
        for (const auto& blk : blocks) worst = std::max(worst, blk.validation_error);
        j["blocks"] = interpolated_blocks_to_json(blocks);
      },
      any);
  emit_report(out, j);
  std::cerr << "worst validation error: " << worst << "\n";
  return 0;
}

int run_slice(const std::string& input, const std::string& axes_arg,
              const std::string& grid_arg, double radius, const std::string& base_arg,
              double tol, const std::string& format, const std::string& out,
              bool deterministic) {
  AnyInstance any = parse_instance(load_json_file(input));
  std::vector<int> axes = parse_int_list(axes_arg);
  if (axes.size() != 2) throw parse_error("slice: --axes expects two indices, e.g. 1,2");
  auto grid_parts = split(grid_arg, 'x');
  if (grid_parts.size() != 2) throw parse_error("slice: --grid expects NIxNJ, e.g. 21x21");
  GridSpec grid;
  grid.ni = parse_int_list(grid_parts[0]).at(0);
  grid.nj = parse_int_list(grid_parts[1]).at(0);
  grid.i_min = grid.j_min = -radius;
  grid.i_max = grid.j_max = radius;
  std::vector<cplx> base_raw =
      base_arg.empty() ? std::vector<cplx>{} : parse_tuple(base_arg);
  std::string text;
  std::visit(
      [&]<class Fam>(const TranslateInstance<Fam>& inst) {
        using T = typename Fam::scalar_type;
        SliceGridResult result = slice_grid(inst, axes[0] - 1, axes[1] - 1, grid,
                                            narrow_tuple<T>(base_raw), tol);
        if (format == "csv") {
          std::ostringstream os;
          write_slice_csv(os, result);
          text = os.str();
        } else if (format == "json") {
          ojson j = report_shell("slice", deterministic);
          j["config"] = {{"input", input}, {"axes", axes_arg}, {"grid", grid_arg},
                         {"radius", radius}, {"tol", tol}};
          j["slice"] = slice_to_json(result);
          text = j.dump(2) + "\n";
        } else {
          throw parse_error("slice: --format must be csv or json");
        }
      },
      any);
  write_output(out, text);
  std::cerr << "slice: " << grid.ni << "x" << grid.nj << " cells\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"framelab: frame classification and translate-intersection analysis"};
  app.require_subcommand(1);

  std::string out;
  bool deterministic = false;
  app.add_option("--out", out, "write output to this file instead of stdout");
  app.add_flag("--deterministic", deterministic,
               "omit the timestamp so identical runs produce identical bytes");

  GenOptions gen;
  CLI::App* cmd_gen = app.add_subcommand("gen", "generate a family or instance as JSON");
  cmd_gen->add_option("--case", gen.case_name, "hilbert, cstar, or module");
  cmd_gen->add_option("--field", gen.field_name, "R or C");
  cmd_gen->add_option("--n", gen.n, "vector dimension (hilbert)");
  cmd_gen->add_option("--N", gen.points, "number of measure-space points");
  cmd_gen->add_option("--l", gen.l, "tuple length; 0 generates a single family");
  cmd_gen->add_option("--signature", gen.signature, "block sizes, e.g. 2,1 (cstar)");
  cmd_gen->add_option("--summands", gen.summands, "module summands, e.g. 1x2,2x2");
  cmd_gen->add_option("--seed", gen.seed, "RNG seed");
  cmd_gen->add_option("--margin", gen.margin, "minimum frame margin for generated frames");
  cmd_gen->add_option("--a", gen.tight_a, "frame constant for --tight");
  cmd_gen->add_flag("--frame", gen.want_frame, "generate a frame family");
  cmd_gen->add_flag("--tight", gen.want_tight, "generate a tight frame (hilbert only)");
  cmd_gen->add_flag("--doubled", gen.want_doubled,
                    "with --l: doubled-translate instance A(i) = 2 U(i)");
  cmd_gen->add_flag("--random-weights", gen.random_weights,
                    "random positive weights instead of counting measure");

  std::string input, tuple_arg, axes_arg = "1,2", grid_arg = "21x21", base_arg;
  std::string format = "csv";
  double tol = kDefaultTol, band = kDefaultBand, radius = 2.0;
  long long samples = 10000;
  std::uint64_t seed = 1;
  int probes = 0, e_index = 1, degree = 0;
  bool gaussian = false;

  CLI::App* cmd_classify = app.add_subcommand("classify", "classify a family JSON file");
  cmd_classify->add_option("input", input, "family JSON file")->required();
  cmd_classify->add_option("--tol", tol, "relative classification tolerance");
  cmd_classify->add_option("--probes", probes,
                           "module only: sampled reconstruction probes");
  cmd_classify->add_option("--seed", seed, "probe RNG seed");

  CLI::App* cmd_member = app.add_subcommand(
      "membership", "test a tuple against every translate hypersurface");
  cmd_member->add_option("input", input, "instance JSON file")->required();
  cmd_member->add_option("--c", tuple_arg, "tuple, e.g. 0.3,-0.4 or 1+2i,0")->required();
  cmd_member->add_option("--tol", tol, "relative classification tolerance");

  CLI::App* cmd_verify = app.add_subcommand(
      "verify", "sampled check that frame verdicts and determinant signs agree");
  cmd_verify->add_option("input", input, "instance JSON file")->required();
  cmd_verify->add_option("--samples", samples, "number of sampled tuples");
  cmd_verify->add_option("--seed", seed, "sampler seed");
  cmd_verify->add_option("--radius", radius, "sampling box radius");
  cmd_verify->add_flag("--gaussian", gaussian, "Gaussian sampler instead of uniform box");
  cmd_verify->add_option("--tol", tol, "relative classification tolerance");
  cmd_verify->add_option("--band", band, "exclusion band around the hypersurfaces");

  CLI::App* cmd_measure = app.add_subcommand(
      "measure", "Monte Carlo estimate of the failure-set volume fraction");
  cmd_measure->add_option("input", input, "instance JSON file")->required();
  cmd_measure->add_option("--samples", samples, "number of sampled tuples");
  cmd_measure->add_option("--seed", seed, "sampler seed");
  cmd_measure->add_option("--radius", radius, "sampling box radius");
  cmd_measure->add_option("--tol", tol, "relative classification tolerance");

  CLI::App* cmd_interp = app.add_subcommand(
      "interp", "interpolate the determinant polynomials of one index (real only)");
  cmd_interp->add_option("input", input, "instance JSON file")->required();
  cmd_interp->add_option("--e", e_index, "hypersurface index, 1-based");
  cmd_interp->add_option("--degree", degree, "fit degree; 0 uses twice the block dimension");
  cmd_interp->add_option("--radius", radius, "interpolation node radius");
  cmd_interp->add_option("--seed", seed, "interpolation node seed; 0 keeps the default");

  CLI::App* cmd_slice = app.add_subcommand(
      "slice", "evaluate a planar slice of the tuple space on a grid");
  cmd_slice->add_option("input", input, "instance JSON file")->required();
  cmd_slice->add_option("--axes", axes_arg, "two 1-based tuple coordinates, e.g. 1,2");
  cmd_slice->add_option("--grid", grid_arg, "grid resolution NIxNJ");
  cmd_slice->add_option("--radius", radius, "half-width of the grid in both axes");
  cmd_slice->add_option("--c", base_arg, "base tuple for the remaining coordinates");
  cmd_slice->add_option("--tol", tol, "relative classification tolerance");
  cmd_slice->add_option("--format", format, "csv (default) or json");

  for (CLI::App* sc : {cmd_gen, cmd_classify, cmd_member, cmd_verify, cmd_measure,
                       cmd_interp, cmd_slice})
    sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*cmd_gen) return run_gen(gen, out);
    if (*cmd_classify)
      return run_classify(input, tol, probes, seed, out, deterministic);
    if (*cmd_member) return run_membership(input, tuple_arg, tol, out, deterministic);
    if (*cmd_verify)
      return run_verify(input, samples, seed, radius, gaussian, tol, band, out,
                        deterministic);
    if (*cmd_measure)
      return run_measure(input, samples, seed, radius, tol, out, deterministic);
    if (*cmd_interp)
      return run_interp(input, e_index, degree, radius, seed, out, deterministic);
    if (*cmd_slice)
      return run_slice(input, axes_arg, grid_arg, radius, base_arg, tol, format, out,
                       deterministic);
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const framelab::error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "internal error: " << ex.what() << "\n";
    return 3;
  }
}
