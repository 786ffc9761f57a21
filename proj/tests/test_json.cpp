#include <catch2/catch_amalgamated.hpp>

#include <framelab/json_io.hpp>

using namespace framelab;

namespace {

template <class Fam>
const Fam& as(const AnyFamily& any) {
  return std::get<Fam>(any);
}

}  // namespace

TEST_CASE("vector families round-trip through JSON") {
  DiscreteMeasureSpace sp = DiscreteMeasureSpace::random(3, 4);
  auto fam = random_bessel<cplx>(21, sp, 3);
  ojson j = family_to_json(fam);
  CHECK(j.at("case") == "hilbert");
  CHECK(j.at("field") == "C");
  CHECK(j.at("n") == 3);

  AnyFamily parsed = parse_family(j);
  const auto& back = as<VectorFamily<cplx>>(parsed);
  CHECK(back.vectors() == fam.vectors());
  CHECK(back.space() == fam.space());

  // Serialization is deterministic.
  CHECK(family_to_json(back).dump() == j.dump());

  auto rfam = random_bessel<double>(22, 5, 2);
  AnyFamily rparsed = parse_family(family_to_json(rfam));
  CHECK(as<VectorFamily<double>>(rparsed).vectors() == rfam.vectors());
  CHECK(as<VectorFamily<double>>(rparsed).space().is_counting());
}

TEST_CASE("algebra families round-trip through JSON") {
  AlgebraSignature sig({2, 1});
  DiscreteMeasureSpace sp = DiscreteMeasureSpace::random(5, 3);
  auto fam = random_cstar_family<cplx>(31, sp, sig);
  ojson j = family_to_json(fam);
  CHECK(j.at("case") == "cstar");
  CHECK(j.at("signature") == ojson::array({2, 1}));

  AnyFamily parsed = parse_family(j);
  const auto& back = as<AlgebraFamily<cplx>>(parsed);
  CHECK(back.signature() == sig);
  for (int i = 0; i < 3; ++i)
    for (int b = 0; b < 2; ++b)
      CHECK(back.element(i).block(b) == fam.element(i).block(b));

  auto rfam = random_cstar_family<double>(32, 2, sig);
  AnyFamily rparsed = parse_family(family_to_json(rfam));
  const auto& rback = as<AlgebraFamily<double>>(rparsed);
  for (int i = 0; i < 2; ++i)
    CHECK(rback.element(i).block(0) == rfam.element(i).block(0));
}

TEST_CASE("module families round-trip through JSON") {
  ModuleSignature sig({{2, 3}, {1, 2}});
  auto fam = random_module_family<cplx>(41, 3, sig);
  ojson j = family_to_json(fam);
  CHECK(j.at("case") == "module");
  CHECK(j.at("summands") == ojson::array({ojson::array({2, 3}), ojson::array({1, 2})}));

  AnyFamily parsed = parse_family(j);
  const auto& back = as<ModuleFamily<cplx>>(parsed);
  CHECK(back.signature() == sig);
  for (int i = 0; i < 3; ++i)
    for (int b = 0; b < 2; ++b)
      CHECK(back.element(i).block(b) == fam.element(i).block(b));
}

TEST_CASE("instances round-trip through JSON") {
  auto inst = random_hilbert_instance<cplx>(51, 2, DiscreteMeasureSpace::counting(4), 2);
  ojson j = instance_to_json(inst);
  CHECK(j.at("case") == "hilbert");
  CHECK(j.at("field") == "C");
  CHECK(j.at("l") == 2);

  AnyInstance parsed = parse_instance(j);
  const auto& back = std::get<TranslateInstance<VectorFamily<cplx>>>(parsed);
  CHECK(back.count() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(back.translate(i).vectors() == inst.translate(i).vectors());
    CHECK(back.frame(i).vectors() == inst.frame(i).vectors());
  }
  CHECK(instance_to_json(back).dump() == j.dump());

  auto minst = random_module_instance<double>(52, 1, DiscreteMeasureSpace::counting(3),
                                              ModuleSignature({{1, 2}}));
  AnyInstance mparsed = parse_instance(instance_to_json(minst));
  CHECK(std::get<TranslateInstance<ModuleFamily<double>>>(mparsed).count() == 1);
}

TEST_CASE("real fields accept plain numbers only") {
  ojson j = ojson::parse(R"({
    "case": "hilbert", "field": "R", "n": 1,
    "vectors": [[1.0], [[1.0, 2.0]]]
  })");
  CHECK_THROWS_AS(parse_family(j), parse_error);

  // Complex fields accept both plain numbers and [re, im] pairs.
  ojson jc = ojson::parse(R"({
    "case": "hilbert", "field": "C", "n": 2,
    "vectors": [[1.0, [0.0, 1.0]]]
  })");
  AnyFamily cparsed = parse_family(jc);
  const auto& fam = as<VectorFamily<cplx>>(cparsed);
  CHECK(fam.vectors()(0, 0) == cplx(1, 0));
  CHECK(fam.vectors()(0, 1) == cplx(0, 1));
}

TEST_CASE("malformed documents are rejected with parse errors") {
  CHECK_THROWS_AS(parse_family(ojson::parse("[1, 2]")), parse_error);
  CHECK_THROWS_AS(parse_family(ojson::parse(R"({"case": "banach"})")), parse_error);
  CHECK_THROWS_AS(parse_family(ojson::parse(R"({"case": "hilbert", "field": "Q"})")),
                  parse_error);
  CHECK_THROWS_AS(parse_family(ojson::parse(R"({"case": "hilbert", "field": "R"})")),
                  parse_error);
  CHECK_THROWS_AS(
      parse_family(ojson::parse(R"({"case": "hilbert", "field": "R", "n": 2,
                                    "vectors": [[1.0]]})")),
      parse_error);
  CHECK_THROWS_AS(
      parse_family(ojson::parse(R"({"case": "hilbert", "field": "R", "n": 0,
                                    "vectors": []})")),
      parse_error);
  // Weight vector of the wrong length.
  CHECK_THROWS_AS(
      parse_family(ojson::parse(R"({"case": "hilbert", "field": "R", "n": 1,
                                    "weights": [1.0],
                                    "vectors": [[1.0], [2.0]]})")),
      parse_error);
  // Nonpositive weights violate the measure-space contract.
  CHECK_THROWS_AS(
      parse_family(ojson::parse(R"({"case": "hilbert", "field": "R", "n": 1,
                                    "weights": [1.0, 0.0],
                                    "vectors": [[1.0], [2.0]]})")),
      contract_error);
  // Signature/shape mismatch in algebra elements.
  CHECK_THROWS_AS(
      parse_family(ojson::parse(R"({"case": "cstar", "field": "R", "signature": [2],
                                    "elements": [[[[1.0]]]]})")),
      parse_error);
}

TEST_CASE("instance documents validate the frame condition of A") {
  // U = (0), A = (0): the A family is not a frame.
  ojson j = ojson::parse(R"({
    "case": "hilbert", "field": "R", "l": 1,
    "U": [{"case": "hilbert", "field": "R", "n": 1, "vectors": [[0.0]]}],
    "A": [{"case": "hilbert", "field": "R", "n": 1, "vectors": [[0.0]]}]
  })");
  CHECK_THROWS_AS(parse_instance(j), contract_error);

  ojson short_list = ojson::parse(R"({
    "case": "hilbert", "field": "R", "l": 2,
    "U": [{"case": "hilbert", "field": "R", "n": 1, "vectors": [[0.0]]}],
    "A": [{"case": "hilbert", "field": "R", "n": 1, "vectors": [[1.0]]}]
  })");
  CHECK_THROWS_AS(parse_instance(short_list), parse_error);
}

TEST_CASE("classification and report serialization") {
  auto fam = random_frame<double>(61, 4, 2);
  FrameClassification cls = classify_family<double>(fam);
  ojson j = classification_to_json(cls);
  CHECK(j.at("kind") == "frame");
  CHECK(j.at("lower").get<double>() == Catch::Approx(cls.lower));
  CHECK(j.at("tight_constant").is_null());

  auto tight = random_tight_frame<double>(62, 4, 2, 2.0);
  ojson jt = classification_to_json(classify_family<double>(tight));
  CHECK(jt.at("kind") == "tight_frame");
  CHECK(jt.at("tight_constant").get<double>() == Catch::Approx(2.0));

  auto inst = random_hilbert_instance<double>(63, 2, DiscreteMeasureSpace::counting(4), 2);
  SamplerSpec sampler{5, 2.0, false};
  BiconditionalReport report = verify_biconditional(inst, sampler, 200);
  ojson jr = biconditional_report_to_json(report);
  CHECK(jr.at("samples") == 200);
  CHECK(jr.at("all_agree") == true);
  CHECK(jr.at("counterexamples").is_array());

  MeasureEstimate est = failure_measure(inst, 2.0, 500, 7);
  ojson je = measure_estimate_to_json(est);
  CHECK(je.at("samples") == 500);
  CHECK(je.at("fraction").get<double>() >= 0.0);

  MembershipReport mem =
      intersection_membership(inst, std::vector<double>{0.3, -0.4});
  ojson jm = membership_report_to_json(mem);
  CHECK(jm.at("per_index").size() == 2);
  CHECK(jm.at("per_index")[0].at("index") == 1);
}

TEST_CASE("slice CSV has the documented header and row count") {
  std::vector<VectorFamily<double>> u, a;
  MatR m0(2, 2), m1(2, 2), i2(2, 2);
  m0 << 0, 0, 0, 1;
  m1 << 1, 0, 0, 0;
  i2 << 1, 0, 0, 1;
  u.emplace_back(DiscreteMeasureSpace::counting(2), m0);
  u.emplace_back(DiscreteMeasureSpace::counting(2), m1);
  a.emplace_back(DiscreteMeasureSpace::counting(2), i2);
  a.emplace_back(DiscreteMeasureSpace::counting(2), i2);
  TranslateInstance<VectorFamily<double>> inst(std::move(u), std::move(a));

  GridSpec grid;
  grid.ni = 3;
  grid.nj = 4;
  SliceGridResult result = slice_grid(inst, 0, 1, grid);
  std::ostringstream os;
  write_slice_csv(os, result);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "ci,cj,min_value,verdict");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK((line.find(",in") != std::string::npos ||
           line.find(",out") != std::string::npos));
  }
  CHECK(rows == 12);
}
