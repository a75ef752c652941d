#include "fgdesc/slp.hpp"

#include <algorithm>
#include <bit>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "fgdesc/builders.hpp"
#include "fgdesc/numtheory.hpp"

namespace fgdesc {

int Slp::reduced_length() const {
  int n = 0;
  for (const Instr& s : steps)
    if (s.kind != Instr::Kind::Source) ++n;
  return n;
}

int Slp::last_value(const FiniteGroup& g) const {
  return values.empty() ? g.identity() : values.back();
}

void Slp::validate(const FiniteGroup& g) const {
  if (values.size() != steps.size())
    throw std::logic_error("slp: value list length mismatch");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Instr& s = steps[i];
    int expect;
    switch (s.kind) {
      case Instr::Kind::Source:
        expect = base.at(s.a);
        break;
      case Instr::Kind::Inverse:
        if (s.a < 0 || s.a >= static_cast<int>(i))
          throw std::logic_error("slp: forward reference");
        expect = g.inv(values[s.a]);
        break;
      case Instr::Kind::Product:
        if (s.a < 0 || s.a >= static_cast<int>(i) || s.b < 0 ||
            s.b >= static_cast<int>(i))
          throw std::logic_error("slp: forward reference");
        expect = g.mul(values[s.a], values[s.b]);
        break;
    }
    if (values[i] != expect) throw std::logic_error("slp: value mismatch");
  }
}

std::string Slp::dump() const {
  std::ostringstream os;
  for (const Instr& s : steps) {
    switch (s.kind) {
      case Instr::Kind::Source: os << "src " << s.a << "\n"; break;
      case Instr::Kind::Inverse: os << "inv " << s.a << "\n"; break;
      case Instr::Kind::Product: os << "mul " << s.a << " " << s.b << "\n"; break;
    }
  }
  return os.str();
}

namespace {

// Shared state of the doubling construction. K(i) holds all subset products
// of the z's found so far (exponent masks), and an SLP computes the z's.
struct CubeBuilder {
  const FiniteGroup& g;
  Slp slp;
  std::vector<int> zs;
  std::vector<int> z_step;
  std::vector<std::uint32_t> masks{0};
  std::vector<int> vals;
  std::vector<char> kk;       // membership of K^-1 K
  std::vector<int> kk_list;

  explicit CubeBuilder(const FiniteGroup& group) : g(group), kk(group.order(), 0) {
    vals.push_back(g.identity());
    recompute_kk();
  }

  void recompute_kk() {
    std::fill(kk.begin(), kk.end(), 0);
    kk_list.clear();
    for (int a : vals)
      for (int b : vals) {
        int v = g.mul(g.inv(a), b);
        if (!kk[v]) {
          kk[v] = 1;
          kk_list.push_back(v);
        }
      }
  }

  int source_step(int base_index) {
    // Reuse an existing source step for the same base element.
    for (std::size_t i = 0; i < slp.steps.size(); ++i)
      if (slp.steps[i].kind == Slp::Instr::Kind::Source && slp.steps[i].a == base_index)
        return static_cast<int>(i);
    slp.steps.push_back({Slp::Instr::Kind::Source, base_index, 0});
    slp.values.push_back(slp.base[base_index]);
    return static_cast<int>(slp.steps.size()) - 1;
  }

  // Appends steps computing the subset product for a mask; returns the step
  // index, or -1 for the empty mask (identity, no step needed).
  int emit_mask(std::uint32_t mask) {
    int step = -1;
    for (std::size_t j = 0; j < zs.size(); ++j) {
      if (!((mask >> j) & 1)) continue;
      if (step < 0) {
        step = z_step[j];
      } else {
        slp.steps.push_back({Slp::Instr::Kind::Product, step, z_step[j]});
        slp.values.push_back(g.mul(slp.values[step], slp.values[z_step[j]]));
        step = static_cast<int>(slp.steps.size()) - 1;
      }
    }
    return step;
  }

  // One extension step: the least (v0, v1, x) in index order escaping
  // K^-1 K, skipping pairs where both coordinates are full-length products.
  // Returns false when K^-1 K already covers <S>.
  bool extend(const std::vector<int>& source_elems,
              const std::vector<int>& source_base_idx) {
    int s = static_cast<int>(zs.size());
    for (std::size_t i0 = 0; i0 < masks.size(); ++i0)
      for (std::size_t i1 = 0; i1 < masks.size(); ++i1) {
        if (s > 0 && std::popcount(masks[i0]) == s && std::popcount(masks[i1]) == s)
          continue;
        int v = g.mul(g.inv(vals[i0]), vals[i1]);
        for (std::size_t xi = 0; xi < source_elems.size(); ++xi) {
          int z = g.mul(v, source_elems[xi]);
          if (kk[z]) continue;
          // Found the new z; extend the SLP and the cube.
          int step0 = emit_mask(masks[i0]);
          int step1 = emit_mask(masks[i1]);
          int xstep = source_step(source_base_idx[xi]);
          int cur;
          if (step0 < 0) {
            cur = step1;
          } else {
            slp.steps.push_back({Slp::Instr::Kind::Inverse, step0, 0});
            slp.values.push_back(g.inv(slp.values[step0]));
            int inv_step = static_cast<int>(slp.steps.size()) - 1;
            if (step1 < 0) {
              cur = inv_step;
            } else {
              slp.steps.push_back({Slp::Instr::Kind::Product, inv_step, step1});
              slp.values.push_back(g.mul(slp.values[inv_step], slp.values[step1]));
              cur = static_cast<int>(slp.steps.size()) - 1;
            }
          }
          if (cur < 0) {
            cur = xstep;
          } else {
            slp.steps.push_back({Slp::Instr::Kind::Product, cur, xstep});
            slp.values.push_back(g.mul(slp.values[cur], slp.values[xstep]));
            cur = static_cast<int>(slp.steps.size()) - 1;
          }
          if (slp.values[cur] != z) throw std::logic_error("cube step mismatch");
          zs.push_back(z);
          z_step.push_back(cur);
          std::size_t old = masks.size();
          for (std::size_t m = 0; m < old; ++m) {
            masks.push_back(masks[m] | (1u << (zs.size() - 1)));
            vals.push_back(g.mul(vals[m], z));
          }
          if (masks.size() != (1u << zs.size()))
            throw std::logic_error("cube did not double");
          recompute_kk();
          return true;
        }
      }
    return false;
  }
};

}  // namespace

Slp reachability_slp(const FiniteGroup& g, const std::vector<int>& s, int target) {
  ClosureResult c = closure(g, s);
  if (!c.subgroup.contains(target))
    throw std::invalid_argument("target is not generated by the given set");

  Slp out;
  out.base = s;
  // Target already a source (or the identity with an empty base).
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] == target) {
      out.steps.push_back({Slp::Instr::Kind::Source, static_cast<int>(i), 0});
      out.values.push_back(target);
      return out;
    }
  if (target == g.identity()) {
    if (s.empty()) return out;  // empty product
    out.steps.push_back({Slp::Instr::Kind::Source, 0, 0});
    out.values.push_back(s[0]);
    out.steps.push_back({Slp::Instr::Kind::Inverse, 0, 0});
    out.values.push_back(g.inv(s[0]));
    out.steps.push_back({Slp::Instr::Kind::Product, 0, 1});
    out.values.push_back(g.identity());
    return out;
  }

  CubeBuilder cube(g);
  cube.slp.base = s;
  std::vector<int> base_idx(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) base_idx[i] = static_cast<int>(i);
  while (!cube.kk[target])
    if (!cube.extend(s, base_idx))
      throw std::logic_error("cube construction stalled before reaching target");

  // target = v0^-1 v1: least pair by cube index.
  for (std::size_t i0 = 0; i0 < cube.masks.size(); ++i0)
    for (std::size_t i1 = 0; i1 < cube.masks.size(); ++i1)
      if (g.mul(g.inv(cube.vals[i0]), cube.vals[i1]) == target) {
        Slp res = cube.slp;
        int step0 = -1;
        {
          CubeBuilder* cb = &cube;
          // Emit onto the result copy.
          std::swap(res, cb->slp);
          step0 = cb->emit_mask(cb->masks[i0]);
          int step1 = cb->emit_mask(cb->masks[i1]);
          int cur;
          if (step0 < 0) {
            cur = step1;
          } else {
            cb->slp.steps.push_back({Slp::Instr::Kind::Inverse, step0, 0});
            cb->slp.values.push_back(g.inv(cb->slp.values[step0]));
            int inv_step = static_cast<int>(cb->slp.steps.size()) - 1;
            if (step1 < 0) {
              cur = inv_step;
            } else {
              cb->slp.steps.push_back({Slp::Instr::Kind::Product, inv_step, step1});
              cb->slp.values.push_back(
                  g.mul(cb->slp.values[inv_step], cb->slp.values[step1]));
              cur = static_cast<int>(cb->slp.steps.size()) - 1;
            }
          }
          if (cur < 0)
            throw std::logic_error("empty pair for a non-identity target");
          std::swap(res, cb->slp);
        }
        res.validate(g);
        int r = paper_log(g.order());
        if (res.reduced_length() > (r + 1) * (r + 1))
          throw std::logic_error("reachability SLP exceeds its bound");
        return res;
      }
  throw std::logic_error("pair decomposition not found");
}

PreprocessingChain preprocessing_chain(const FiniteGroup& g,
                                       const std::vector<std::vector<int>>& gensets) {
  for (std::size_t i = 1; i < gensets.size(); ++i) {
    std::vector<int> prev = gensets[i - 1];
    std::vector<int> cur = gensets[i];
    std::sort(prev.begin(), prev.end());
    std::sort(cur.begin(), cur.end());
    if (!std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()))
      throw std::invalid_argument("generator sets must be ascending");
  }

  PreprocessingChain out;
  out.parent = &g;
  out.input_sets = gensets;
  out.level_sizes.push_back(0);
  out.slp_level_steps.push_back(0);

  // Union base in first-appearance order.
  std::vector<int> base;
  std::vector<int> base_of_elem(g.order(), -1);
  for (const auto& t : gensets)
    for (int e : t)
      if (base_of_elem[e] < 0) {
        base_of_elem[e] = static_cast<int>(base.size());
        base.push_back(e);
      }

  CubeBuilder cube(g);
  cube.slp.base = base;
  for (std::size_t lvl = 0; lvl < gensets.size(); ++lvl) {
    // Sources scanned in ascending element order within the level.
    std::vector<int> elems = gensets[lvl];
    std::sort(elems.begin(), elems.end());
    std::vector<int> idxs;
    for (int e : elems) idxs.push_back(base_of_elem[e]);
    ClosureResult target = closure(g, elems);
    int prev_z = static_cast<int>(cube.zs.size());
    while (static_cast<int>(cube.kk_list.size()) < target.subgroup.order())
      if (!cube.extend(elems, idxs))
        throw std::logic_error("preprocessing cube stalled");
    // Invariants of the lemma, checked as we build.
    int gi = target.subgroup.order();
    if (gi > 1) {
      int lg = paper_log(gi);
      if (static_cast<int>(cube.zs.size()) > lg)
        throw std::logic_error("preprocessing set larger than log|G_i|");
      if (cube.slp.reduced_length() >= lg * lg)
        throw std::logic_error("preprocessing SLP cost reached log^2|G_i|");
    }
    (void)prev_z;
    out.level_sizes.push_back(static_cast<int>(cube.zs.size()));
    out.slp_level_steps.push_back(static_cast<int>(cube.slp.steps.size()));
  }
  out.set = cube.zs;
  out.z_step = cube.z_step;
  out.slp = std::move(cube.slp);
  out.cube_masks = std::move(cube.masks);
  out.cube_values = std::move(cube.vals);
  out.slp.validate(g);
  return out;
}

const std::vector<std::pair<int, int>>& PreprocessingChain::pairs(
    const FiniteGroup& g, int nbits) const {
  auto it = pair_cache_.find(nbits);
  if (it != pair_cache_.end()) return it->second;
  std::vector<std::pair<int, int>> table(g.order(), {-1, -1});
  // Least pair by (popcount sum, index order); identity keeps (-1, -1)
  // meaning the empty word.
  std::vector<char> have(g.order(), 0);
  have[g.identity()] = 1;
  std::uint32_t limit = 1u << nbits;
  for (int total = 0; total <= 2 * nbits; ++total)
    for (std::size_t i0 = 0; i0 < cube_masks.size(); ++i0) {
      if (cube_masks[i0] >= limit) continue;
      int p0 = std::popcount(cube_masks[i0]);
      if (p0 > total) continue;
      for (std::size_t i1 = 0; i1 < cube_masks.size(); ++i1) {
        if (cube_masks[i1] >= limit) continue;
        if (p0 + std::popcount(cube_masks[i1]) != total) continue;
        int v = g.mul(g.inv(cube_values[i0]), cube_values[i1]);
        if (!have[v]) {
          have[v] = 1;
          table[v] = {static_cast<int>(i0), static_cast<int>(i1)};
        }
      }
    }
  return pair_cache_.emplace(nbits, std::move(table)).first->second;
}

Word PreprocessingChain::word_for(const FiniteGroup& g, int element, int nbits) const {
  if (nbits < 0) nbits = static_cast<int>(set.size());
  if (element == g.identity()) return {};
  auto [i0, i1] = pairs(g, nbits)[element];
  if (i0 < 0) throw std::invalid_argument("element outside the generated subgroup");
  Word w;
  for (int j = static_cast<int>(set.size()) - 1; j >= 0; --j)
    if ((cube_masks[i0] >> j) & 1) w.push_back(-(j + 1));
  for (std::size_t j = 0; j < set.size(); ++j)
    if ((cube_masks[i1] >> j) & 1) w.push_back(static_cast<int>(j) + 1);
  return free_reduce(std::move(w));
}

Slp PreprocessingChain::slp_for(const FiniteGroup& g, int element, int nbits) const {
  if (nbits < 0) nbits = static_cast<int>(set.size());
  Slp out;
  out.base = set;
  if (element == g.identity() && set.empty()) return out;
  std::vector<int> src_step(set.size(), -1);
  auto source = [&](int j) {
    if (src_step[j] < 0) {
      out.steps.push_back({Slp::Instr::Kind::Source, j, 0});
      out.values.push_back(set[j]);
      src_step[j] = static_cast<int>(out.steps.size()) - 1;
    }
    return src_step[j];
  };
  auto emit_mask = [&](std::uint32_t mask) {
    int step = -1;
    for (std::size_t j = 0; j < set.size(); ++j) {
      if (!((mask >> j) & 1)) continue;
      int zj = source(static_cast<int>(j));
      if (step < 0) {
        step = zj;
      } else {
        out.steps.push_back({Slp::Instr::Kind::Product, step, zj});
        out.values.push_back(g.mul(out.values[step], out.values[zj]));
        step = static_cast<int>(out.steps.size()) - 1;
      }
    }
    return step;
  };
  if (element == g.identity()) {
    if (nbits == 0) throw std::invalid_argument("identity over an empty set");
    int z0 = source(0);
    out.steps.push_back({Slp::Instr::Kind::Inverse, z0, 0});
    out.values.push_back(g.inv(out.values[z0]));
    out.steps.push_back({Slp::Instr::Kind::Product, z0,
                         static_cast<int>(out.steps.size()) - 1});
    out.values.push_back(g.identity());
    return out;
  }
  auto [i0, i1] = pairs(g, nbits)[element];
  if (i0 < 0) throw std::invalid_argument("element outside the generated subgroup");
  int step0 = emit_mask(cube_masks[i0]);
  int cur;
  if (step0 < 0) {
    cur = emit_mask(cube_masks[i1]);
  } else {
    out.steps.push_back({Slp::Instr::Kind::Inverse, step0, 0});
    out.values.push_back(g.inv(out.values[step0]));
    cur = static_cast<int>(out.steps.size()) - 1;
    for (std::size_t j = 0; j < set.size(); ++j)
      if ((cube_masks[i1] >> j) & 1) {
        int zj = source(static_cast<int>(j));
        out.steps.push_back({Slp::Instr::Kind::Product, cur, zj});
        out.values.push_back(g.mul(out.values[cur], out.values[zj]));
        cur = static_cast<int>(out.steps.size()) - 1;
      }
  }
  if (cur < 0 || out.values[cur] != element)
    throw std::logic_error("pair SLP does not compute the element");
  out.validate(g);
  return out;
}

std::vector<int> swift_generating_set(const FiniteGroup& g) {
  std::vector<int> gens = small_generating_set(g);
  PreprocessingChain chain = preprocessing_chain(g, {gens});
  int radius = cayley_radius(g, chain.set);
  if (g.order() > 1 &&
      (radius < 0 || radius > 2 * static_cast<int>(chain.set.size())))
    throw std::logic_error("swift set radius check failed");
  return chain.set;
}

int cayley_radius(const FiniteGroup& g, const std::vector<int>& gens) {
  std::vector<int> dist(g.order(), -1);
  std::queue<int> q;
  dist[g.identity()] = 0;
  q.push(g.identity());
  int radius = 0;
  while (!q.empty()) {
    int e = q.front();
    q.pop();
    for (int x : gens)
      for (int f : {g.mul(e, x), g.mul(e, g.inv(x))})
        if (dist[f] < 0) {
          dist[f] = dist[e] + 1;
          radius = std::max(radius, dist[f]);
          q.push(f);
        }
  }
  for (int d : dist)
    if (d < 0) return -1;
  return radius;
}

fo::FormulaP preproc_formula(const FiniteGroup& g, const PreprocessingChain& chain,
                             const std::vector<std::vector<fo::Term>>& t_terms,
                             const std::vector<int>& a_vars, int& next_var,
                             bool beta_route) {
  using fo::FormulaP;
  using fo::Term;
  using namespace builders;

  if (a_vars.size() != chain.set.size())
    throw std::invalid_argument("one variable per chain element expected");
  if (t_terms.size() != chain.input_sets.size())
    throw std::invalid_argument("one term list per level expected");

  // Term for each base element: the T-variable that introduced it.
  std::vector<Term> base_terms;
  {
    std::vector<char> seen(g.order(), 0);
    for (std::size_t lvl = 0; lvl < chain.input_sets.size(); ++lvl)
      for (std::size_t j = 0; j < chain.input_sets[lvl].size(); ++j) {
        int e = chain.input_sets[lvl][j];
        if (!seen[e]) {
          seen[e] = 1;
          base_terms.push_back(t_terms[lvl][j]);
        }
      }
  }

  // psi_0, split one block per level so the witness plans derive the
  // A-variables as soon as their level's T-variables are assigned. Each
  // block existentially binds its own intermediate SLP values; chain
  // elements are shared across blocks through the free A-variables.
  std::vector<char> is_z_step(chain.slp.steps.size(), 0);
  std::vector<int> z_of_step(chain.slp.steps.size(), -1);
  for (std::size_t j = 0; j < chain.z_step.size(); ++j) {
    is_z_step[chain.z_step[j]] = 1;
    z_of_step[chain.z_step[j]] = static_cast<int>(j);
  }
  std::vector<Term> step_term(chain.slp.steps.size());
  std::vector<FormulaP> psi_blocks;
  for (std::size_t lvl = 0; lvl < chain.input_sets.size(); ++lvl) {
    int from = chain.slp_level_steps[lvl];
    int to = chain.slp_level_steps[lvl + 1];
    if (from == to) continue;
    std::vector<FormulaP> eqs;
    std::vector<int> inner_vars;
    auto plan = std::make_shared<fo::SlpPlan>();
    // The plan replays the whole prefix; only this level's chain elements
    // are checked.
    for (int i = 0; i < to; ++i) {
      const Slp::Instr& st = chain.slp.steps[i];
      if (st.kind == Slp::Instr::Kind::Source) {
        if (base_terms[st.a].kind != Term::Kind::Var)
          throw std::invalid_argument("T terms must be variables for the witness plan");
        plan->steps.push_back({fo::SlpPlan::Step::Kind::Src, base_terms[st.a].var, 0});
      } else {
        plan->steps.push_back({st.kind == Slp::Instr::Kind::Inverse
                                   ? fo::SlpPlan::Step::Kind::Inv
                                   : fo::SlpPlan::Step::Kind::Mul,
                               st.a, st.b});
      }
      if (i < from) continue;  // step terms already fixed by earlier blocks
      if (st.kind == Slp::Instr::Kind::Source) {
        step_term[i] = base_terms[st.a];
        if (is_z_step[i]) {
          int var = a_vars[z_of_step[i]];
          plan->checks.push_back({var, i});
          eqs.push_back(fo::mk_eq(Term::v(var), base_terms[st.a]));
          step_term[i] = Term::v(var);
        }
        continue;
      }
      Term rhs = st.kind == Slp::Instr::Kind::Inverse
                     ? t_inv(step_term[st.a])
                     : t_mul(step_term[st.a], step_term[st.b]);
      int var;
      if (is_z_step[i]) {
        var = a_vars[z_of_step[i]];
        plan->checks.push_back({var, i});
      } else {
        var = next_var++;
        inner_vars.push_back(var);
      }
      step_term[i] = Term::v(var);
      eqs.push_back(fo::mk_eq(Term::v(var), std::move(rhs)));
    }
    if (eqs.empty()) continue;
    FormulaP block = fo::mk_and(std::move(eqs));
    for (auto it = inner_vars.rbegin(); it != inner_vars.rend(); ++it)
      block = fo::mk_exists(*it, block);
    fo::ShortcutTag tag;
    tag.kind = fo::ShortcutTag::Kind::SlpWitness;
    tag.op = "mul";
    tag.id_const = "e";
    tag.plan = std::move(plan);
    psi_blocks.push_back(fo::with_tag(block, tag));
  }
  if (psi_blocks.empty())
    psi_blocks.push_back(fo::mk_eq(builders::t_e(), builders::t_e()));
  std::vector<FormulaP> conj = std::move(psi_blocks);

  // Per level: <T_i> and <A_i> generate the same elements.
  for (std::size_t lvl = 0; lvl < chain.input_sets.size(); ++lvl) {
    if (t_terms[lvl].empty() || chain.level_sizes[lvl + 1] == 0) continue;
    std::vector<Term> as;
    for (int j = 0; j < chain.level_sizes[lvl + 1]; ++j)
      as.push_back(Term::v(a_vars[j]));
    int y = next_var++;
    long long v = g.order();
    FormulaP via_t =
        beta_route ? beta(v, Term::v(y), t_terms[lvl], next_var)
                   : alpha(v, Term::v(y), t_terms[lvl], next_var);
    FormulaP via_a = beta_route ? beta(v, Term::v(y), as, next_var)
                                : alpha(v, Term::v(y), as, next_var);
    conj.push_back(fo::mk_forall(
        y, fo::mk_and({fo::mk_implies(via_t, via_a), fo::mk_implies(via_a, via_t)})));
  }
  return fo::mk_and(std::move(conj));
}

}  // namespace fgdesc
