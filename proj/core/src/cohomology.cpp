#include "stonemod/cohomology.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stonemod {

namespace {

GroupElem basis_elem(const FinAbGroup& g, int j) {
  GroupElem e = g.zero();
  e.residues[j] = 1;
  return e;
}

// The l-th free basis element of a flat layer R^t (the unit of copy l).
GroupElem free_basis_elem(const ModuleSum& layer, int l) {
  return layer.inj[l].apply(layer.sum.ring().one());
}

// The unique module map out of a flat free layer sending basis element l to
// images[l]: additive generator (l, c) = rho_c . eps_l goes to rho_c . images[l].
ModHom from_free_basis(const ModuleSum& layer, const FinModule& target,
                       const std::vector<GroupElem>& images) {
  const FiniteRing& ring = layer.sum.ring();
  const int t = static_cast<int>(layer.inj.size());
  if (static_cast<int>(images.size()) != t)
    throw std::invalid_argument("from_free_basis: one image per free generator");
  IntMat m(target.group().rank(), layer.sum.group().rank());
  for (int l = 0; l < t; ++l)
    for (int c = 0; c < ring.rank(); ++c)
      m.set_col(layer.group_sum.perm[l][c],
                target.action_gen(c).apply(images[l]).residues);
  return ModHom(layer.sum, target,
                AbHom(layer.sum.group(), target.group(), std::move(m)));
}

ModuleSum make_free_layer(const FiniteRing& ring, Side side, int t) {
  return module_direct_sum(
      ring, side, std::vector<FinModule>(t, ring_as_module(ring, side)));
}

// Accumulate sign * block into d at the (tcopy, scopy) block of coefficient
// sums whose parts are all the same group (permutation path guaranteed).
void add_block(IntMat& d, const DirectSum& tds, Int tcopy, const DirectSum& sds,
               Int scopy, const IntMat& block, Int sign) {
  const std::vector<int>& tp = tds.perm[static_cast<size_t>(tcopy)];
  const std::vector<int>& sp = sds.perm[static_cast<size_t>(scopy)];
  for (int i = 0; i < block.rows(); ++i)
    for (int j = 0; j < block.cols(); ++j)
      if (block.at(i, j) != 0) d.at(tp[i], sp[j]) += sign * block.at(i, j);
}

void add_identity_block(IntMat& d, const DirectSum& tds, Int tcopy,
                        const DirectSum& sds, Int scopy, Int sign, int r) {
  const std::vector<int>& tp = tds.perm[static_cast<size_t>(tcopy)];
  const std::vector<int>& sp = sds.perm[static_cast<size_t>(scopy)];
  for (int i = 0; i < r; ++i) d.at(tp[i], sp[i]) += sign;
}

// Greedy generating set: walk the standard abelian basis and keep each vector
// not already in the ring-submodule spanned by the previous picks.  The span
// membership test is integral: x lies in the submodule generated by `chosen`
// iff x is in the integer column span of all generator-action images of the
// chosen elements together with the group relations.
std::vector<GroupElem> module_generators(const FinModule& m) {
  const FinAbGroup& g = m.group();
  const int k = g.rank();
  const int rr = m.ring().rank();
  std::vector<GroupElem> chosen;
  std::vector<std::vector<Int>> span_cols;
  for (int j = 0; j < k; ++j) {
    GroupElem e = basis_elem(g, j);
    IntMat mat(k, static_cast<int>(span_cols.size()) + k);
    for (size_t c = 0; c < span_cols.size(); ++c)
      mat.set_col(static_cast<int>(c), span_cols[c]);
    for (int i = 0; i < k; ++i)
      mat.at(i, static_cast<int>(span_cols.size()) + i) =
          g.invariant_factors()[i];
    if (in_column_span(mat, e.residues)) continue;
    chosen.push_back(e);
    for (int c = 0; c < rr; ++c)
      span_cols.push_back(m.action_gen(c).apply(e).residues);
  }
  return chosen;
}

void check_layer_cap(size_t t, const FiniteRing& ring) {
  if (static_cast<Int>(t) * ring.rank() > 768)
    throw std::invalid_argument("free_resolution: layer size cap exceeded");
}

}  // namespace

// ---------------------------------------------------------------------------
// Cochain complexes.

CheckResult complex_check(const CochainComplex& c) {
  if (c.groups.size() != c.diffs.size() + 1)
    return {false, "complex_check: expected " +
                       std::to_string(c.diffs.size() + 1) + " groups for " +
                       std::to_string(c.diffs.size()) + " differentials"};
  for (size_t n = 0; n < c.diffs.size(); ++n)
    if (!(c.diffs[n].source() == c.groups[n]) ||
        !(c.diffs[n].target() == c.groups[n + 1]))
      return {false, "complex_check: differential " + std::to_string(n) +
                         " does not run C^" + std::to_string(n) + " -> C^" +
                         std::to_string(n + 1)};
  for (size_t n = 0; n + 1 < c.diffs.size(); ++n)
    for (int j = 0; j < c.groups[n].rank(); ++j) {
      GroupElem dd = c.diffs[n + 1].apply(c.diffs[n].apply(basis_elem(c.groups[n], j)));
      if (!c.groups[n + 2].is_zero(dd))
        return {false, "complex_check: d.d != 0 on generator " +
                           std::to_string(j) + " of degree " +
                           std::to_string(n)};
    }
  return {};
}

// ---------------------------------------------------------------------------
// Subquotients.

Subquotient subquotient_of(const AbHom& incoming, const AbHom& outgoing) {
  if (!(incoming.target() == outgoing.source()))
    throw std::invalid_argument(
        "subquotient_of: incoming target and outgoing source differ");
  if (!compose(outgoing, incoming).is_zero_map())
    throw std::invalid_argument("subquotient_of: outgoing . incoming != 0");
  HomKio k = hom_kio(outgoing);
  const FinAbGroup& src = incoming.source();
  IntMat lift(k.kernel.rank(), src.rank());
  for (int j = 0; j < src.rank(); ++j) {
    auto pre = solve_hom(k.kernel_incl, incoming.apply(basis_elem(src, j)));
    if (!pre)
      throw std::logic_error("subquotient_of: image does not lift to the kernel");
    lift.set_col(j, pre->residues);
  }
  AbHom lifted(src, k.kernel, std::move(lift));
  HomKio q = hom_kio(lifted);
  return Subquotient{q.cokernel, k.kernel, k.kernel_incl, q.cokernel_proj};
}

GroupElem subquotient_class(const Subquotient& s, const GroupElem& ambient) {
  auto k = solve_hom(s.incl, ambient);
  if (!k)
    throw std::invalid_argument("subquotient_class: element is not a cycle");
  return s.proj.apply(*k);
}

GroupElem subquotient_rep(const Subquotient& s, const GroupElem& cls) {
  auto k = solve_hom(s.proj, cls);
  if (!k)
    throw std::invalid_argument("subquotient_rep: class has no representative");
  return s.incl.apply(*k);
}

AbHom induced_on_subquotients(const Subquotient& src, const Subquotient& dst,
                              const AbHom& ambient_map) {
  if (!(ambient_map.source() == src.incl.target()) ||
      !(ambient_map.target() == dst.incl.target()))
    throw std::invalid_argument(
        "induced_on_subquotients: ambient map endpoints do not match");
  // Boundaries must go to boundaries, else the induced map is not defined.
  HomKio kb = hom_kio(src.proj);
  for (int j = 0; j < kb.kernel.rank(); ++j) {
    GroupElem b = src.incl.apply(kb.kernel_incl.apply(basis_elem(kb.kernel, j)));
    GroupElem cls = subquotient_class(dst, ambient_map.apply(b));
    if (!dst.group.is_zero(cls))
      throw std::invalid_argument(
          "induced_on_subquotients: boundaries are not sent to boundaries");
  }
  IntMat m(dst.group.rank(), src.group.rank());
  for (int j = 0; j < src.group.rank(); ++j) {
    GroupElem rep = subquotient_rep(src, basis_elem(src.group, j));
    m.set_col(j, subquotient_class(dst, ambient_map.apply(rep)).residues);
  }
  return AbHom(src.group, dst.group, std::move(m));
}

std::vector<Subquotient> complex_cohomology(const CochainComplex& c) {
  CheckResult chk = complex_check(c);
  if (!chk.ok) throw std::invalid_argument(chk.witness);
  std::vector<Subquotient> h;
  h.reserve(c.diffs.size());
  for (size_t n = 0; n < c.diffs.size(); ++n) {
    AbHom incoming = n ? c.diffs[n - 1]
                       : AbHom::zero(FinAbGroup::trivial(), c.groups[0]);
    h.push_back(subquotient_of(incoming, c.diffs[n]));
  }
  return h;
}

// ---------------------------------------------------------------------------
// Bar cohomology.

CohomologyResult bar_cohomology(const FinGroup& g, const FinModule& a,
                                int n_max) {
  const auto& info = a.ring().group_info();
  if (!info || !(info->basis_group == g))
    throw std::invalid_argument(
        "bar_cohomology: coefficients must be a module over the group ring of g");
  if (a.side() != Side::left)
    throw std::invalid_argument("bar_cohomology: left modules only");
  if (n_max < 0)
    throw std::invalid_argument("bar_cohomology: n_max must be >= 0");

  const Int q = g.order();
  const int r = a.group().rank();

  CochainComplex c;
  if (r == 0) {
    // Trivial coefficients: every cochain group is trivial.
    for (int n = 0; n <= n_max + 1; ++n) c.groups.emplace_back();
    for (int n = 0; n <= n_max; ++n)
      c.diffs.push_back(AbHom::zero(FinAbGroup::trivial(), FinAbGroup::trivial()));
  } else {
    std::vector<Int> ncopies(n_max + 2);
    ncopies[0] = 1;
    for (int n = 1; n <= n_max + 1; ++n) {
      ncopies[n] = checked_mul(ncopies[n - 1], q);
      if (checked_mul(ncopies[n], r) > 8192)
        throw std::invalid_argument("bar_cohomology: size cap exceeded");
    }

    std::vector<DirectSum> cs;
    cs.reserve(n_max + 2);
    for (int n = 0; n <= n_max + 1; ++n)
      cs.push_back(direct_sum(
          std::vector<FinAbGroup>(static_cast<size_t>(ncopies[n]), a.group())));
    for (const auto& ds : cs) c.groups.push_back(ds.sum);

    for (int n = 0; n <= n_max; ++n) {
      IntMat d(cs[n + 1].sum.rank(), cs[n].sum.rank());
      for (Int tidx = 0; tidx < ncopies[n + 1]; ++tidx) {
        std::vector<int> tau(n + 1);
        {
          Int x = tidx;
          for (int k = 0; k <= n; ++k) {
            tau[k] = static_cast<int>(x % q);
            x /= q;
          }
        }
        // g_1 . phi(g_2..g_{n+1})
        add_block(d, cs[n + 1], tidx, cs[n], tidx / q,
                  a.action_gen(tau[0]).matrix(), +1);
        // (-1)^i phi(..., g_i g_{i+1}, ...)
        Int sign = 1;
        for (int i = 1; i <= n; ++i) {
          sign = -sign;
          Int sidx = 0;
          Int pw = 1;
          for (int k = 0; k <= n; ++k) {
            if (k == i) continue;
            int digit = (k == i - 1) ? g.mul(tau[i - 1], tau[i]) : tau[k];
            sidx += pw * digit;
            pw *= q;
          }
          add_identity_block(d, cs[n + 1], tidx, cs[n], sidx, sign, r);
        }
        // (-1)^{n+1} phi(g_1..g_n)
        add_identity_block(d, cs[n + 1], tidx, cs[n], tidx % ncopies[n],
                           (n % 2 == 0) ? -1 : +1, r);
      }
      c.diffs.emplace_back(cs[n].sum, cs[n + 1].sum, std::move(d));
    }
  }

  std::vector<Subquotient> h = complex_cohomology(c);
  std::vector<FinAbGroup> groups;
  groups.reserve(h.size());
  for (const auto& s : h) groups.push_back(s.group);
  return CohomologyResult{std::move(c), std::move(h), std::move(groups)};
}

// ---------------------------------------------------------------------------
// Free resolutions and Ext.

FreeResolution free_resolution(const FinModule& p, int depth) {
  if (depth < 0)
    throw std::invalid_argument("free_resolution: depth must be >= 0");
  const FiniteRing& ring = p.ring();
  const Side side = p.side();

  std::vector<int> ranks;
  std::vector<ModuleSum> layers;
  std::vector<ModHom> boundary;

  std::vector<GroupElem> gens = module_generators(p);
  check_layer_cap(gens.size(), ring);
  ranks.push_back(static_cast<int>(gens.size()));
  layers.push_back(make_free_layer(ring, side, ranks[0]));
  ModHom augment = from_free_basis(layers[0], p, gens);

  std::optional<FinModule> ker;
  std::optional<ModHom> ker_incl;  // kernel -> layer i
  {
    ModuleKio kio = module_kio(augment);
    ker = kio.kernel;
    ker_incl = kio.kernel_incl;
  }
  for (int i = 1; i <= depth; ++i) {
    std::vector<GroupElem> kg = module_generators(*ker);
    check_layer_cap(kg.size(), ring);
    ranks.push_back(static_cast<int>(kg.size()));
    layers.push_back(make_free_layer(ring, side, ranks[i]));
    ModHom cover = from_free_basis(layers[i], *ker, kg);
    boundary.push_back(mod_compose(*ker_incl, cover));
    if (i < depth) {
      ModuleKio kio = module_kio(cover);
      ker = kio.kernel;
      ker_incl = kio.kernel_incl;
    }
  }
  return FreeResolution{p, std::move(ranks), std::move(layers),
                        std::move(boundary), std::move(augment)};
}

CochainComplex hom_complex(const FreeResolution& r, const FinModule& a) {
  if (!(a.ring() == r.target.ring()) || a.side() != r.target.side())
    throw std::invalid_argument(
        "hom_complex: coefficient module over a different ring or side");
  const int depth = static_cast<int>(r.layers.size()) - 1;
  std::vector<DirectSum> ds;
  ds.reserve(r.layers.size());
  for (int n = 0; n <= depth; ++n)
    ds.push_back(direct_sum(
        std::vector<FinAbGroup>(static_cast<size_t>(r.ranks[n]), a.group())));

  CochainComplex c;
  for (const auto& d : ds) c.groups.push_back(d.sum);
  for (int n = 0; n < depth; ++n) {
    IntMat d(ds[n + 1].sum.rank(), ds[n].sum.rank());
    for (int l = 0; l < r.ranks[n + 1]; ++l) {
      GroupElem v = r.boundary[n].apply(free_basis_elem(r.layers[n + 1], l));
      for (int j = 0; j < r.ranks[n]; ++j) {
        GroupElem rjl = r.layers[n].proj[j].apply(v);
        add_block(d, ds[n + 1], l, ds[n], j, a.act_of(rjl).matrix(), +1);
      }
    }
    c.diffs.emplace_back(ds[n].sum, ds[n + 1].sum, std::move(d));
  }
  return c;
}

ExtResult ext_via_resolution(const FinModule& p, const FinModule& a,
                             int n_max) {
  if (n_max < 0)
    throw std::invalid_argument("ext_via_resolution: n_max must be >= 0");
  FreeResolution res = free_resolution(p, n_max + 1);
  CochainComplex c = hom_complex(res, a);
  std::vector<Subquotient> h = complex_cohomology(c);
  std::vector<FinAbGroup> groups;
  groups.reserve(h.size());
  for (const auto& s : h) groups.push_back(s.group);
  return ExtResult{std::move(res), std::move(c), std::move(h),
                   std::move(groups)};
}

// ---------------------------------------------------------------------------
// Shapiro's lemma.

ShapiroReport shapiro_check(const FinGroup& g, const std::vector<int>& h,
                            const FinModule& a, int n_max) {
  const auto& info = a.ring().group_info();
  if (!info || !(info->basis_group == g))
    throw std::invalid_argument(
        "shapiro_check: coefficients must be a module over the group ring of g");
  if (a.side() != Side::left)
    throw std::invalid_argument("shapiro_check: left modules only");

  FinModule ind = induced_module(info->modulus, g, h);
  ExtResult ext = ext_via_resolution(ind, a, n_max);

  SubgroupView hv = subgroup_group(g, h);
  CohomologyResult bar = bar_cohomology(hv.group, restrict_module(a, hv), n_max);

  ShapiroReport rep;
  rep.ext_side = ext.groups;
  rep.bar_side = bar.groups;
  for (int n = 0; n <= n_max; ++n)
    if (!(ext.groups[n] == bar.groups[n])) {
      rep.ok = false;
      rep.witness = "shapiro_check: degree " + std::to_string(n) +
                    ": Ext side " + ext.groups[n].to_string() +
                    " != subgroup cohomology " + bar.groups[n].to_string();
      break;
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Long exact sequence from a short exact sequence of modules.

LESReport les_from_ses(const ModHom& incl, const ModHom& proj,
                       const FinModule& a, int n_max) {
  if (!(incl.target() == proj.source()))
    throw std::invalid_argument("les_from_ses: middle modules differ");
  const FinModule& psub = incl.source();
  const FinModule& pmid = incl.target();
  const FinModule& pquo = proj.target();
  if (!(a.ring() == pmid.ring()) || a.side() != pmid.side())
    throw std::invalid_argument(
        "les_from_ses: coefficient module over a different ring or side");
  if (n_max < 0)
    throw std::invalid_argument("les_from_ses: n_max must be >= 0");
  {
    std::vector<AbHom> seq = {
        AbHom::zero(FinAbGroup::trivial(), psub.group()), incl.hom(),
        proj.hom(), AbHom::zero(pquo.group(), FinAbGroup::trivial())};
    ExactnessResult ex = check_exact_all(seq);
    if (!ex.exact)
      throw std::invalid_argument("les_from_ses: input sequence is not exact (" +
                                  ex.witness->description + ")");
  }

  const int depth = n_max + 1;
  const FiniteRing& ring = pmid.ring();
  const Side side = pmid.side();
  FreeResolution rsub = free_resolution(psub, depth);
  FreeResolution rquo = free_resolution(pquo, depth);

  // Horseshoe glue: flat middle layers with the sub block first.
  std::vector<ModuleSum> glayers;
  std::vector<int> granks;
  for (int n = 0; n <= depth; ++n) {
    granks.push_back(rsub.ranks[n] + rquo.ranks[n]);
    glayers.push_back(make_free_layer(ring, side, granks[n]));
  }
  auto embed_part = [](const ModuleSum& part, const ModuleSum& whole,
                       int offset) {
    std::vector<AbHom> comps;
    comps.reserve(part.inj.size());
    for (size_t j = 0; j < part.inj.size(); ++j)
      comps.push_back(whole.inj[offset + j].hom());
    return ModHom(part.sum, whole.sum,
                  out_of_sum_to(whole.sum.group(), part.group_sum, comps));
  };
  auto split_part = [](const ModuleSum& whole, const ModuleSum& part,
                       int offset) {
    std::vector<AbHom> comps;
    comps.reserve(part.inj.size());
    for (size_t j = 0; j < part.inj.size(); ++j)
      comps.push_back(whole.proj[offset + j].hom());
    return ModHom(whole.sum, part.sum,
                  into_product_from(whole.sum.group(), part.group_sum, comps));
  };
  std::vector<ModHom> esub, equo, ssub, squo;
  for (int n = 0; n <= depth; ++n) {
    esub.push_back(embed_part(rsub.layers[n], glayers[n], 0));
    equo.push_back(embed_part(rquo.layers[n], glayers[n], rsub.ranks[n]));
    ssub.push_back(split_part(glayers[n], rsub.layers[n], 0));
    squo.push_back(split_part(glayers[n], rquo.layers[n], rsub.ranks[n]));
  }

  // sigma0 : F''_0 -> P lifting the quotient augmentation through proj.
  ModHom sigma0 = [&] {
    std::vector<GroupElem> imgs;
    for (int l = 0; l < rquo.ranks[0]; ++l) {
      auto pre = solve_hom(
          proj.hom(), rquo.augment.apply(free_basis_elem(rquo.layers[0], l)));
      if (!pre)
        throw std::logic_error("les_from_ses: free generator lift failed");
      imgs.push_back(*pre);
    }
    return from_free_basis(rquo.layers[0], pmid, imgs);
  }();

  // tau[n-1] : F''_n -> F'_{n-1} with
  //   incl . augment' . tau_1 = -sigma0 . boundary''_1   and
  //   boundary'_{n-1} . tau_n = -tau_{n-1} . boundary''_n  for n >= 2.
  std::vector<ModHom> tau;
  for (int n = 1; n <= depth; ++n) {
    std::vector<GroupElem> imgs;
    for (int l = 0; l < rquo.ranks[n]; ++l) {
      GroupElem w =
          rquo.boundary[n - 1].apply(free_basis_elem(rquo.layers[n], l));
      std::optional<GroupElem> y;
      if (n == 1) {
        GroupElem z = pmid.group().neg(sigma0.apply(w));
        auto q = solve_hom(incl.hom(), z);
        if (!q) throw std::logic_error("les_from_ses: horseshoe lift failed");
        y = solve_hom(rsub.augment.hom(), *q);
      } else {
        GroupElem z =
            rsub.layers[n - 2].sum.group().neg(tau[n - 2].apply(w));
        y = solve_hom(rsub.boundary[n - 2].hom(), z);
      }
      if (!y) throw std::logic_error("les_from_ses: horseshoe lift failed");
      imgs.push_back(*y);
    }
    tau.push_back(from_free_basis(rquo.layers[n], rsub.layers[n - 1].sum, imgs));
  }

  // Glued boundary (f', f'') |-> (boundary' f' + tau f'', boundary'' f'')
  // and augmentation (f', f'') |-> incl(augment' f') + sigma0(f'').
  std::vector<ModHom> gboundary;
  for (int n = 1; n <= depth; ++n) {
    ModHom term1 =
        mod_compose(esub[n - 1], mod_compose(rsub.boundary[n - 1], ssub[n]));
    ModHom term2 = mod_compose(esub[n - 1], mod_compose(tau[n - 1], squo[n]));
    ModHom term3 =
        mod_compose(equo[n - 1], mod_compose(rquo.boundary[n - 1], squo[n]));
    gboundary.push_back(mod_add(term1, mod_add(term2, term3)));
  }
  ModHom gaug = mod_add(mod_compose(mod_compose(incl, rsub.augment), ssub[0]),
                        mod_compose(sigma0, squo[0]));

  // The glued complex must again resolve the middle module.
  if (!is_surjective(gaug.hom()))
    throw std::logic_error("les_from_ses: glued augmentation not surjective");
  if (!exact_at(gboundary[0].hom(), gaug.hom()).exact)
    throw std::logic_error("les_from_ses: glued resolution inexact at layer 0");
  for (int n = 1; n < depth; ++n)
    if (!exact_at(gboundary[n].hom(), gboundary[n - 1].hom()).exact)
      throw std::logic_error("les_from_ses: glued resolution inexact at layer " +
                             std::to_string(n));
  FreeResolution gres{pmid, granks, glayers, gboundary, gaug};

  CochainComplex csub = hom_complex(rsub, a);
  CochainComplex cquo = hom_complex(rquo, a);
  CochainComplex cmid = hom_complex(gres, a);

  // Coefficient sums (identical to the ones hom_complex builds internally).
  std::vector<DirectSum> dsub, dquo, dmid;
  for (int n = 0; n <= depth; ++n) {
    dsub.push_back(direct_sum(std::vector<FinAbGroup>(
        static_cast<size_t>(rsub.ranks[n]), a.group())));
    dquo.push_back(direct_sum(std::vector<FinAbGroup>(
        static_cast<size_t>(rquo.ranks[n]), a.group())));
    dmid.push_back(direct_sum(
        std::vector<FinAbGroup>(static_cast<size_t>(granks[n]), a.group())));
  }

  // Per degree: 0 -> Hom(F'',A) -> Hom(G,A) -> Hom(F',A) -> 0, split by
  // msplit (a section of mproj that is not a chain map).
  std::vector<AbHom> mincl, mproj, mquoproj, msplit;
  for (int n = 0; n <= depth; ++n) {
    const int ts = rsub.ranks[n];
    std::vector<AbHom> ci, cp, cq, cs;
    for (int j = 0; j < rquo.ranks[n]; ++j) {
      ci.push_back(dmid[n].inj[ts + j]);
      cq.push_back(dmid[n].proj[ts + j]);
    }
    for (int j = 0; j < ts; ++j) {
      cp.push_back(dmid[n].proj[j]);
      cs.push_back(dmid[n].inj[j]);
    }
    mincl.push_back(out_of_sum_to(cmid.groups[n], dquo[n], ci));
    mproj.push_back(into_product_from(cmid.groups[n], dsub[n], cp));
    mquoproj.push_back(into_product_from(cmid.groups[n], dquo[n], cq));
    msplit.push_back(out_of_sum_to(cmid.groups[n], dsub[n], cs));
  }
  for (int n = 0; n < depth; ++n) {
    if (!(compose(cmid.diffs[n], mincl[n]) == compose(mincl[n + 1], cquo.diffs[n])))
      throw std::logic_error("les_from_ses: quotient inclusion is not a chain map");
    if (!(compose(csub.diffs[n], mproj[n]) == compose(mproj[n + 1], cmid.diffs[n])))
      throw std::logic_error("les_from_ses: sub projection is not a chain map");
  }
  for (int n = 0; n <= depth; ++n) {
    if (!is_injective(mincl[n]) || !is_surjective(mproj[n]) ||
        !exact_at(mincl[n], mproj[n]).exact)
      throw std::logic_error(
          "les_from_ses: hom sequence not exact in degree " + std::to_string(n));
  }

  std::vector<Subquotient> hsub = complex_cohomology(csub);
  std::vector<Subquotient> hquo = complex_cohomology(cquo);
  std::vector<Subquotient> hmid = complex_cohomology(cmid);

  LESReport rep;
  for (int n = 0; n <= n_max; ++n) {
    AbHom an = induced_on_subquotients(hquo[n], hmid[n], mincl[n]);
    AbHom bn = induced_on_subquotients(hmid[n], hsub[n], mproj[n]);
    rep.groups.push_back(hquo[n].group);
    rep.labels.push_back("Ext^" + std::to_string(n) + "(quotient, A)");
    rep.groups.push_back(hmid[n].group);
    rep.labels.push_back("Ext^" + std::to_string(n) + "(middle, A)");
    rep.groups.push_back(hsub[n].group);
    rep.labels.push_back("Ext^" + std::to_string(n) + "(sub, A)");
    rep.maps.push_back(std::move(an));
    rep.maps.push_back(std::move(bn));
    if (n < n_max) {
      // Snake connecting map: lift a cycle along the splitting, push through
      // the glued differential, read off the quotient block.
      IntMat dm(hquo[n + 1].group.rank(), hsub[n].group.rank());
      for (int j = 0; j < hsub[n].group.rank(); ++j) {
        GroupElem z = subquotient_rep(hsub[n], basis_elem(hsub[n].group, j));
        GroupElem w = cmid.diffs[n].apply(msplit[n].apply(z));
        if (!dsub[n + 1].sum.is_zero(mproj[n + 1].apply(w)))
          throw std::logic_error("les_from_ses: snake lift left a sub residue");
        dm.set_col(j, subquotient_class(hquo[n + 1], mquoproj[n + 1].apply(w))
                          .residues);
      }
      rep.maps.emplace_back(hsub[n].group, hquo[n + 1].group, std::move(dm));
    }
  }

  const int nodes = static_cast<int>(rep.groups.size());
  for (int k = 0; k + 1 < nodes; ++k) {
    AbHom incoming = k ? rep.maps[k - 1]
                       : AbHom::zero(FinAbGroup::trivial(), rep.groups[0]);
    ExactnessResult er = exact_at(incoming, rep.maps[k]);
    if (!er.exact && rep.ok) {
      rep.ok = false;
      rep.witness = "les_from_ses: not exact at " + rep.labels[k] + ": " +
                    er.witness->description;
    }
    rep.positions.push_back(std::move(er));
  }
  return rep;
}

}  // namespace stonemod
