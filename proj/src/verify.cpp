#include "fgdesc/verify.hpp"

#include <sstream>

#include <json.hpp>

#include "fgdesc/builders.hpp"
#include "fgdesc/numtheory.hpp"

#ifndef FGDESC_VERSION
#define FGDESC_VERSION "0.1.0"
#endif

namespace fgdesc {

std::string VerificationReport::to_json() const {
  nlohmann::json j;
  j["target"] = target;
  j["verdict"] = verdict;
  j["satisfied_by_target"] = satisfied_by_target;
  j["catalog_complete"] = catalog_complete;
  j["symbol_length"] = metrics.symbol_length;
  j["binary_length"] = metrics.binary_length;
  j["alternation"] = metrics.alternation.str();
  j["candidates"] = nlohmann::json::array();
  for (const auto& c : candidates)
    j["candidates"].push_back({{"label", c.label},
                               {"isomorphic_to_target", c.isomorphic_to_target},
                               {"satisfied", c.satisfied},
                               {"failing_conjunct", c.failing_conjunct}});
  j["config_hash"] = config::config_hash();
  j["version"] = FGDESC_VERSION;
  return j.dump(2);
}

VerificationReport verify_describes(const fo::FormulaP& phi, const FiniteGroup& g,
                                    const GroupCatalog& catalog,
                                    fo::EvalOptions::Mode mode) {
  if (catalog.order != g.order())
    throw std::invalid_argument("catalog order does not match the target");
  VerificationReport rep;
  rep.target = g.label().empty() ? "order" + std::to_string(g.order()) : g.label();
  rep.metrics = fo::length_report(phi);
  rep.catalog_complete = catalog.complete;

  {
    fo::GroupStructure target(g);
    fo::Evaluator ev(target, {mode});
    rep.satisfied_by_target = ev.evaluate(phi);
  }
  bool all_rejected = true;
  for (const FiniteGroup& h : catalog.groups) {
    VerificationReport::Candidate c;
    c.label = h.label();
    c.isomorphic_to_target = is_isomorphic(h, g);
    fo::GroupStructure cand(h);
    fo::Evaluator ev(cand, {mode});
    c.satisfied = ev.evaluate(phi);
    if (!c.satisfied) c.failing_conjunct = ev.diagnostics().failing_conjunct;
    if (!c.isomorphic_to_target && c.satisfied) all_rejected = false;
    if (c.isomorphic_to_target && !c.satisfied) rep.satisfied_by_target = false;
    rep.candidates.push_back(std::move(c));
  }
  if (!rep.satisfied_by_target || !all_rejected) rep.verdict = "fails";
  else if (!rep.catalog_complete) rep.verdict = "incomplete-catalog";
  else rep.verdict = "describes";
  return rep;
}

long long lower_bound_bits_groups(long long p, int n) {
  if (n <= 6) return 0;  // the exponent vanishes
  // floor(log2 p) whole bits per base-p digit.
  long long bits_per_digit = 0;
  for (long long x = p; x >= 2; x >>= 1) ++bits_per_digit;
  return 2LL * n * n * (n - 6) * bits_per_digit / 27;
}

long long lower_bound_bits_graphs(int n) {
  if (n < 3) return 0;
  long long main_term = static_cast<long long>(n) * n / 6;
  long long corr = paper_log(n);
  return main_term > corr ? main_term - corr : 0;
}

long long lower_bound_bits_prime_fields(long long q) {
  return paper_log(q);
}

std::string scaling_report(const std::string& family, int max_k) {
  std::ostringstream os;
  os << "# fgdesc scaling report v1, version " << FGDESC_VERSION << ", config "
     << config::config_hash() << "\n";
  os << "family,order,symbol_length,binary_length,log,log3,ratio_log,ratio_log3\n";
  auto row = [&](long long order, const fo::LengthReport& m) {
    long long lg = paper_log(order);
    long long lg3 = lg * lg * lg;
    double rl = lg == 0 ? 0 : static_cast<double>(m.symbol_length) / lg;
    double rl3 = lg3 == 0 ? 0 : static_cast<double>(m.symbol_length) / lg3;
    os << family << ',' << order << ',' << m.symbol_length << ','
       << m.binary_length << ',' << lg << ',' << lg3 << ',' << rl << ',' << rl3
       << "\n";
  };
  if (family == "cyclic-2k") {
    for (int k = 1; k <= max_k; ++k)
      row(1LL << k, describe_cyclic_2power(k).metrics);
  } else if (family == "elementary-abelian-2") {
    FiniteGroup c2 = cyclic_group(2);
    for (int k = 1; k <= max_k; ++k) {
      fo::FormulaP f =
          builders::char_simple_sentence(c2, k, &PresentationCatalog::shipped());
      row(1LL << k, fo::length_report(f));
    }
  } else if (family == "dihedral") {
    for (int k = 2; k <= std::min(max_k, 9); ++k) {
      FiniteGroup d = dihedral_group(1 << k);
      row(d.order(), describe_group(d).metrics);
    }
  } else if (family == "symmetric") {
    for (int n = 3; n <= std::min(max_k, 6); ++n) {
      FiniteGroup s = symmetric_group(n);
      row(s.order(), describe_group(s).metrics);
    }
  } else {
    throw std::invalid_argument("unknown family: " + family);
  }
  return os.str();
}

}  // namespace fgdesc
