#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "fgdesc/builders.hpp"
#include "fgdesc/json_io.hpp"
#include "fgdesc/pipeline.hpp"
#include "fgdesc/sexpr.hpp"
#include "fgdesc/verify.hpp"

using namespace fgdesc;
using namespace fgdesc::fo;

TEST_CASE("verify_describes verdicts") {
  auto cat2 = enumerate_groups(2);
  FiniteGroup c2 = cyclic_group(2);
  // A sentence with a nontrivial witness describes the only order-2 group.
  FormulaP phi = parse("(exists x (not (= x e)))", group_sig());
  VerificationReport rep = verify_describes(phi, c2, *cat2);
  CHECK(rep.verdict == "describes");

  // cyclic(2,2) on C2xC2: rejected, with the failing conjunct recorded.
  auto cat4 = enumerate_groups(4);
  FiniteGroup v4 = direct_product(c2, c2);
  FormulaP c4desc = builders::cyclic_sentence(2, 2);
  VerificationReport rep2 = verify_describes(c4desc, cyclic_group(4), *cat4);
  CHECK(rep2.verdict == "describes");
  bool saw_rejection = false;
  for (const auto& c : rep2.candidates)
    if (!c.isomorphic_to_target) {
      CHECK_FALSE(c.satisfied);
      CHECK(c.failing_conjunct >= 0);
      saw_rejection = true;
    }
  CHECK(saw_rejection);
  // And the failing sentence from V4's point of view.
  VerificationReport rep3 = verify_describes(c4desc, v4, *cat4);
  CHECK(rep3.verdict == "fails");
  CHECK_FALSE(rep3.satisfied_by_target);

  // Incomplete catalogs are reported as such.
  GroupCatalog partial;
  partial.order = 4;
  partial.groups.push_back(cyclic_group(4));
  partial.complete = false;
  CHECK(verify_describes(c4desc, cyclic_group(4), partial).verdict ==
        "incomplete-catalog");

  CHECK_THROWS(verify_describes(phi, cyclic_group(3), *cat2));  // order mismatch
}

TEST_CASE("verification reports are reproducible") {
  FiniteGroup q8 = dicyclic_group(2);
  auto cat = enumerate_groups(8);
  DescriptionResult res = describe_group(q8);
  std::string a = verify_describes(res.formula, q8, *cat).to_json();
  std::string b = verify_describes(res.formula, q8, *cat).to_json();
  CHECK(a == b);
}

TEST_CASE("lower bound calculators") {
  CHECK(lower_bound_bits_groups(2, 9) == 18);
  CHECK(lower_bound_bits_groups(2, 6) == 0);
  CHECK(lower_bound_bits_groups(2, 3) == 0);
  // Monotone in n for n >= 7.
  for (int n = 7; n < 40; ++n)
    CHECK(lower_bound_bits_groups(2, n + 1) > lower_bound_bits_groups(2, n));
  CHECK(lower_bound_bits_graphs(12) == 144 / 6 - 4);
  CHECK(lower_bound_bits_graphs(2) == 0);
  CHECK(lower_bound_bits_prime_fields(1021) == 10);
}

TEST_CASE("scaling reports") {
  std::string csv = scaling_report("cyclic-2k", 12);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line.find("fgdesc scaling report v1") != std::string::npos);
  std::getline(in, line);
  CHECK(line ==
        "family,order,symbol_length,binary_length,log,log3,ratio_log,ratio_log3");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 12);

  // Single-point family.
  std::string one = scaling_report("symmetric", 3);
  int rows1 = -2;
  std::istringstream in1(one);
  while (std::getline(in1, line))
    if (!line.empty()) ++rows1;
  CHECK(rows1 == 1);

  std::string elem = scaling_report("elementary-abelian-2", 6);
  CHECK(elem.find("elementary-abelian-2") != std::string::npos);
  CHECK_THROWS(scaling_report("nonsense", 3));
}

TEST_CASE("group json round trip") {
  FiniteGroup d4 = dihedral_group(4);
  FiniteGroup back = group_from_json(group_to_json(d4));
  CHECK(back.order() == 8);
  CHECK(is_isomorphic(back, d4));
  FiniteGroup s3 = group_from_json(
      R"({"permutations": ["(1 2)", "(1 2 3)"], "degree": 3, "label": "S3"})");
  CHECK(s3.order() == 6);
  CHECK(s3.label() == "S3");
  CHECK_THROWS(group_from_json(R"({"order": 2})"));
}

TEST_CASE("structure json") {
  auto z4 = structure_from_json(R"({"kind": "zmod", "m": 4})");
  CHECK(z4->size() == 4);
  auto f4 = structure_from_json(R"({"kind": "field", "q": 4})");
  Evaluator ev(*f4);
  CHECK(ev.evaluate(builders::field_sentence(4)));
  auto df = structure_from_json(R"({"kind": "field", "q": 9, "frobenius_power": 1})");
  Evaluator ev2(*df);
  CHECK(ev2.evaluate(builders::difference_field_sentence(9, 1)));
}

TEST_CASE("description bundles verify after a file round trip") {
  FiniteGroup q8 = dicyclic_group(2);
  DescriptionResult res = describe_group(q8);
  std::string sexp = render_file(group_sig(), res.formula);
  std::string tags = tags_to_json(res.formula);
  FormulaFile file = parse_file_text(sexp);
  FormulaP retagged = apply_tags_json(file.formula, tags, *file.sig);
  auto cat = enumerate_groups(8);
  VerificationReport rep = verify_describes(retagged, q8, *cat);
  CHECK(rep.verdict == "describes");
}
