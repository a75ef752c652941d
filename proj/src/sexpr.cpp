#include "fgdesc/sexpr.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

namespace fgdesc::fo {

namespace {

void render_term_rec(const Term& t, std::ostream& os) {
  switch (t.kind) {
    case Term::Kind::Var:
      os << 'x' << t.var;
      return;
    case Term::Kind::Const:
      os << t.sym;
      return;
    case Term::Kind::App:
      os << '(' << t.sym;
      for (const Term& a : t.args) {
        os << ' ';
        render_term_rec(a, os);
      }
      os << ')';
      return;
  }
}

void render_rec(const FormulaP& f, std::ostream& os) {
  switch (f->kind) {
    case Formula::Kind::Eq:
      os << "(= ";
      render_term_rec(f->terms[0], os);
      os << ' ';
      render_term_rec(f->terms[1], os);
      os << ')';
      return;
    case Formula::Kind::Rel:
      os << '(' << f->sym;
      for (const Term& t : f->terms) {
        os << ' ';
        render_term_rec(t, os);
      }
      os << ')';
      return;
    case Formula::Kind::Not:
      os << "(not ";
      render_rec(f->children[0], os);
      os << ')';
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      os << (f->kind == Formula::Kind::And ? "(and" : "(or");
      for (const FormulaP& c : f->children) {
        os << ' ';
        render_rec(c, os);
      }
      os << ')';
      return;
    case Formula::Kind::Implies:
      os << "(implies ";
      render_rec(f->children[0], os);
      os << ' ';
      render_rec(f->children[1], os);
      os << ')';
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      os << (f->kind == Formula::Kind::Forall ? "(forall x" : "(exists x")
         << f->qvar << ' ';
      render_rec(f->children[0], os);
      os << ')';
      return;
  }
}

struct Parser {
  const std::string& text;
  const Signature& sig;
  std::size_t pos = 0;
  std::map<std::string, int> var_index;
  int next_var = 1;

  void skip_ws() {
    while (pos < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[pos]))) {
        ++pos;
      } else if (text[pos] == ';') {  // comment to end of line
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, at);
  }

  char peek() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input", pos);
    return text[pos];
  }

  void expect(char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      fail(std::string("expected '") + c + "'", pos);
    ++pos;
  }

  std::string symbol() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')')
      ++pos;
    if (pos == start) fail("expected symbol", pos);
    return text.substr(start, pos - start);
  }

  int var_of(const std::string& name, std::size_t at) {
    if (name.empty() || std::isdigit(static_cast<unsigned char>(name[0])))
      if (!sig.constants.count(name)) fail("bad variable name '" + name + "'", at);
    auto it = var_index.find(name);
    if (it != var_index.end()) return it->second;
    // Canonical names x<digits> keep their index.
    int idx;
    if (name.size() >= 2 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      idx = std::stoi(name.substr(1));
      if (idx <= 0) fail("variable index must be positive", at);
    } else {
      // Fresh index in first-occurrence order, avoiding canonical ones.
      while (var_index.count("x" + std::to_string(next_var))) ++next_var;
      idx = next_var++;
    }
    var_index[name] = idx;
    return idx;
  }

  Term term() {
    skip_ws();
    std::size_t at = pos;
    if (peek() == '(') {
      ++pos;
      std::string head = symbol();
      auto fit = sig.functions.find(head);
      if (fit == sig.functions.end()) fail("unknown function '" + head + "'", at);
      std::vector<Term> args;
      for (int i = 0; i < fit->second; ++i) args.push_back(term());
      expect(')');
      return Term::f(head, std::move(args));
    }
    std::string name = symbol();
    if (sig.constants.count(name)) return Term::c(name);
    return Term::v(var_of(name, at));
  }

  FormulaP formula() {
    skip_ws();
    std::size_t at = pos;
    expect('(');
    std::string head = symbol();
    if (head == "forall" || head == "exists") {
      std::size_t vat = pos;
      std::string vname = symbol();
      if (sig.constants.count(vname)) fail("constant used as bound variable", vat);
      int v = var_of(vname, vat);
      FormulaP body = formula();
      expect(')');
      return head == "forall" ? mk_forall(v, body) : mk_exists(v, body);
    }
    if (head == "not") {
      FormulaP body = formula();
      expect(')');
      return mk_not(body);
    }
    if (head == "and" || head == "or") {
      std::vector<FormulaP> parts;
      while (peek() != ')') parts.push_back(formula());
      expect(')');
      if (parts.empty()) fail("empty connective", at);
      return head == "and" ? mk_and(std::move(parts)) : mk_or(std::move(parts));
    }
    if (head == "implies") {
      FormulaP a = formula();
      FormulaP b = formula();
      expect(')');
      return mk_implies(a, b);
    }
    if (head == "=") {
      Term a = term();
      Term b = term();
      expect(')');
      return mk_eq(std::move(a), std::move(b));
    }
    auto rit = sig.relations.find(head);
    if (rit != sig.relations.end()) {
      std::vector<Term> args;
      for (int i = 0; i < rit->second; ++i) args.push_back(term());
      expect(')');
      return mk_rel(head, std::move(args));
    }
    fail("unknown connective or relation '" + head + "'", at);
  }
};

}  // namespace

std::string render_term(const Term& t) {
  std::ostringstream os;
  render_term_rec(t, os);
  return os.str();
}

std::string render(const FormulaP& f) {
  std::ostringstream os;
  render_rec(f, os);
  return os.str();
}

FormulaP parse(const std::string& text, const Signature& sig) {
  Parser p{text, sig};
  FormulaP f = p.formula();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input", p.pos);
  return f;
}

Term parse_term_text(const std::string& text, const Signature& sig) {
  Parser p{text, sig};
  Term t = p.term();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input", p.pos);
  return t;
}

std::string render_file(const Signature& sig, const FormulaP& f) {
  return "#sig " + sig.name + "\n" + render(f) + "\n";
}

FormulaFile parse_file_text(const std::string& text) {
  std::size_t pos = 0;
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (text.compare(pos, 5, "#sig ") != 0)
    throw ParseError("expected '#sig <name>' header", pos);
  pos += 5;
  std::size_t eol = text.find('\n', pos);
  if (eol == std::string::npos) throw ParseError("missing formula after header", pos);
  std::string name = text.substr(pos, eol - pos);
  while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back())))
    name.pop_back();
  const Signature& sig = signature_by_name(name);
  return FormulaFile{&sig, parse(text.substr(eol + 1), sig)};
}

// --- tag serialization ------------------------------------------------------

namespace {

using nlohmann::json;

void collect_tags(const FormulaP& f, std::vector<int>& path, json& out) {
  if (f->tag.present()) {
    json t;
    t["path"] = path;
    switch (f->tag.kind) {
      case ShortcutTag::Kind::Generation: t["kind"] = "generation"; break;
      case ShortcutTag::Kind::Power: t["kind"] = "power"; break;
      case ShortcutTag::Kind::PowerUpTo: t["kind"] = "power_up_to"; break;
      case ShortcutTag::Kind::SlpWitness: t["kind"] = "slp_witness"; break;
      case ShortcutTag::Kind::None: break;
    }
    t["op"] = f->tag.op;
    t["id"] = f->tag.id_const;
    t["n"] = f->tag.n;
    t["k"] = f->tag.k;
    t["v"] = f->tag.v;
    for (const Term& term : f->tag.terms) t["terms"].push_back(render_term(term));
    for (const Term& term : f->tag.mod_gens) t["mod"].push_back(render_term(term));
    if (f->tag.plan) {
      json plan;
      for (const auto& s : f->tag.plan->steps) {
        switch (s.kind) {
          case SlpPlan::Step::Kind::Src: plan["steps"].push_back({"src", s.a}); break;
          case SlpPlan::Step::Kind::Inv: plan["steps"].push_back({"inv", s.a}); break;
          case SlpPlan::Step::Kind::Mul:
            plan["steps"].push_back({"mul", s.a, s.b});
            break;
        }
      }
      plan["checks"] = json::array();
      for (const auto& [var, idx] : f->tag.plan->checks)
        plan["checks"].push_back({var, idx});
      t["plan"] = std::move(plan);
    }
    out.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < f->children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    collect_tags(f->children[i], path, out);
    path.pop_back();
  }
}

FormulaP tag_at_path(const FormulaP& f, const std::vector<int>& path, std::size_t d,
                     const ShortcutTag& tag) {
  if (d == path.size()) return with_tag(f, tag);
  Formula out = *f;
  out.children[path[d]] = tag_at_path(f->children[path[d]], path, d + 1, tag);
  return finish(std::move(out));
}

}  // namespace

std::string tags_to_json(const FormulaP& f) {
  json out = json::array();
  std::vector<int> path;
  collect_tags(f, path, out);
  return json{{"tags", out}}.dump(2);
}

FormulaP apply_tags_json(const FormulaP& f, const std::string& json_text,
                         const Signature& sig) {
  json doc = json::parse(json_text);
  FormulaP cur = f;
  for (const json& t : doc.at("tags")) {
    ShortcutTag tag;
    std::string kind = t.at("kind");
    if (kind == "generation") tag.kind = ShortcutTag::Kind::Generation;
    else if (kind == "power") tag.kind = ShortcutTag::Kind::Power;
    else if (kind == "power_up_to") tag.kind = ShortcutTag::Kind::PowerUpTo;
    else if (kind == "slp_witness") tag.kind = ShortcutTag::Kind::SlpWitness;
    else throw std::invalid_argument("unknown tag kind: " + kind);
    tag.op = t.at("op");
    tag.id_const = t.at("id");
    tag.n = t.at("n");
    tag.k = t.at("k");
    tag.v = t.at("v");
    if (t.count("terms"))
      for (const json& s : t.at("terms"))
        tag.terms.push_back(parse_term_text(s.get<std::string>(), sig));
    if (t.count("mod"))
      for (const json& s : t.at("mod"))
        tag.mod_gens.push_back(parse_term_text(s.get<std::string>(), sig));
    if (t.count("plan")) {
      auto plan = std::make_shared<SlpPlan>();
      for (const json& s : t.at("plan").at("steps")) {
        SlpPlan::Step step;
        std::string k = s.at(0);
        if (k == "src") step.kind = SlpPlan::Step::Kind::Src;
        else if (k == "inv") step.kind = SlpPlan::Step::Kind::Inv;
        else step.kind = SlpPlan::Step::Kind::Mul;
        step.a = s.at(1);
        if (k == "mul") step.b = s.at(2);
        plan->steps.push_back(step);
      }
      for (const json& c : t.at("plan").at("checks"))
        plan->checks.push_back({c.at(0), c.at(1)});
      tag.plan = std::move(plan);
    }
    cur = tag_at_path(cur, t.at("path").get<std::vector<int>>(), 0, tag);
  }
  return cur;
}

}  // namespace fgdesc::fo
