#include "stonemod/module.hpp"

#include <stdexcept>
#include <string>

namespace stonemod {

namespace {

GroupElem unit(const FinAbGroup& g, int i) {
  GroupElem e = g.zero();
  e.residues[i] = 1;
  return e;
}

// Restrict the actions of `m` along an injective map incl: K -> M whose
// image is action-invariant.
std::vector<AbHom> restrict_actions(const AbHom& incl, const FinModule& m) {
  const FinAbGroup& k = incl.source();
  std::vector<AbHom> out;
  out.reserve(m.ring().rank());
  for (int i = 0; i < m.ring().rank(); ++i) {
    IntMat mat(k.rank(), k.rank());
    for (int j = 0; j < k.rank(); ++j) {
      GroupElem moved = m.action_gen(i).apply(incl.apply(unit(k, j)));
      auto back = solve_hom(incl, moved);
      if (!back)
        throw std::logic_error("subgroup is not invariant under the ring action");
      mat.set_col(j, back->residues);
    }
    out.push_back(AbHom(k, k, mat));
  }
  return out;
}

// Descend the actions of `m` along a surjective map proj: M -> Q whose
// kernel is action-invariant.
std::vector<AbHom> descend_actions(const AbHom& proj, const FinModule& m) {
  const FinAbGroup& q = proj.target();
  std::vector<AbHom> out;
  out.reserve(m.ring().rank());
  for (int i = 0; i < m.ring().rank(); ++i) {
    IntMat mat(q.rank(), q.rank());
    for (int j = 0; j < q.rank(); ++j) {
      auto pre = solve_hom(proj, unit(q, j));
      if (!pre) throw std::logic_error("descent needs a surjective projection");
      mat.set_col(j, proj.apply(m.action_gen(i).apply(*pre)).residues);
    }
    out.push_back(AbHom(q, q, mat));
  }
  return out;
}

}  // namespace

FinModule::FinModule(FiniteRing ring, FinAbGroup underlying,
                     std::vector<AbHom> action, Side side)
    : ring_(std::move(ring)),
      group_(std::move(underlying)),
      action_(std::move(action)),
      side_(side) {
  const int k = ring_.rank();
  if (static_cast<int>(action_.size()) != k)
    throw std::invalid_argument("need one action map per ring generator");
  for (const auto& a : action_)
    if (a.source() != group_ || a.target() != group_)
      throw std::invalid_argument("action map is not an endomorphism of the module");
  const auto& d = ring_.add().invariant_factors();
  for (int i = 0; i < k; ++i)
    if (!hom_scale(d[i], action_[i]).is_zero_map())
      throw std::invalid_argument(
          "action of generator " + std::to_string(i) +
          " is not killed by its additive order");
  // Compatibility with ring multiplication on generator pairs.  Both sides
  // of the module law are bilinear, so this is equivalent to the full law.
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      AbHom lhs = act_of(ring_.generator_product(i, j));
      AbHom rhs = side_ == Side::left ? compose(action_[i], action_[j])
                                      : compose(action_[j], action_[i]);
      if (lhs != rhs)
        throw std::invalid_argument("action does not respect ring multiplication");
    }
  if (act_of(ring_.one()) != AbHom::identity(group_))
    throw std::invalid_argument("ring unity does not act as the identity");
}

AbHom FinModule::act_of(const GroupElem& r) const {
  if (!ring_.add().is_valid(r))
    throw std::invalid_argument("ring element is invalid");
  AbHom acc = AbHom::zero(group_, group_);
  for (int i = 0; i < ring_.rank(); ++i)
    if (r.residues[i] != 0)
      acc = hom_add(acc, hom_scale(r.residues[i], action_[i]));
  return acc;
}

GroupElem FinModule::act(const GroupElem& r, const GroupElem& m) const {
  return act_of(r).apply(m);
}

ModHom::ModHom(FinModule source, FinModule target, AbHom hom)
    : source_(std::move(source)), target_(std::move(target)), hom_(std::move(hom)) {
  if (!(source_.ring() == target_.ring()))
    throw std::invalid_argument("module map requires a common ring");
  if (source_.side() != target_.side())
    throw std::invalid_argument("module map requires a common side");
  if (hom_.source() != source_.group() || hom_.target() != target_.group())
    throw std::invalid_argument("module map shape mismatch");
  for (int i = 0; i < source_.ring().rank(); ++i)
    if (compose(hom_, source_.action_gen(i)) != compose(target_.action_gen(i), hom_))
      throw std::invalid_argument(
          "map does not commute with the action of generator " + std::to_string(i));
}

ModHom ModHom::zero(const FinModule& source, const FinModule& target) {
  return ModHom(source, target, AbHom::zero(source.group(), target.group()));
}

ModHom ModHom::identity(const FinModule& m) {
  return ModHom(m, m, AbHom::identity(m.group()));
}

ModHom mod_compose(const ModHom& g, const ModHom& f) {
  return ModHom(f.source(), g.target(), compose(g.hom(), f.hom()));
}

ModHom mod_add(const ModHom& f, const ModHom& g) {
  return ModHom(f.source(), f.target(), hom_add(f.hom(), g.hom()));
}

ModHom mod_sub(const ModHom& f, const ModHom& g) {
  return ModHom(f.source(), f.target(), hom_sub(f.hom(), g.hom()));
}

ModHom mod_scale(Int c, const ModHom& f) {
  return ModHom(f.source(), f.target(), hom_scale(c, f.hom()));
}

AbHom hom_inverse(const AbHom& f) {
  if (!is_isomorphism(f))
    throw std::invalid_argument("cannot invert a non-isomorphism");
  const FinAbGroup& t = f.target();
  IntMat mat(f.source().rank(), t.rank());
  for (int j = 0; j < t.rank(); ++j) {
    GroupElem e = t.zero();
    e.residues[j] = 1;
    auto pre = solve_hom(f, e);
    if (!pre) throw std::logic_error("isomorphism failed to solve");
    mat.set_col(j, pre->residues);
  }
  return AbHom(t, f.source(), mat);
}

ModHom mod_inverse(const ModHom& f) {
  return ModHom(f.target(), f.source(), hom_inverse(f.hom()));
}

// ---------------------------------------------------------------------------

FinModule zero_module(const FiniteRing& ring, Side side) {
  FinAbGroup t;
  std::vector<AbHom> action(ring.rank(), AbHom::zero(t, t));
  return FinModule(ring, t, std::move(action), side);
}

FinModule ring_as_module(const FiniteRing& ring, Side side) {
  std::vector<AbHom> action;
  action.reserve(ring.rank());
  for (int i = 0; i < ring.rank(); ++i)
    action.push_back(side == Side::left ? ring.left_mult_gen(i)
                                        : ring.right_mult_gen(i));
  return FinModule(ring, ring.add(), std::move(action), side);
}

FinModule free_module(const FiniteRing& ring, Side side, int t) {
  if (t < 0) throw std::invalid_argument("free module rank must be >= 0");
  std::vector<FinModule> parts(t, ring_as_module(ring, side));
  return module_direct_sum(ring, side, parts).sum;
}

FinModule trivial_module(const FiniteRing& ring, const FinAbGroup& a, Side side) {
  if (!ring.group_info())
    throw std::invalid_argument("trivial module needs a group ring");
  if (ring.group_info()->modulus % a.exponent() != 0)
    throw std::invalid_argument("coefficients must be killed by the ring modulus");
  std::vector<AbHom> action(ring.rank(), AbHom::identity(a));
  return FinModule(ring, a, std::move(action), side);
}

FinModule permutation_module(Int m, const GSet& y) {
  FiniteRing r = group_ring(m, y.group());
  FinAbGroup under{std::vector<Int>(y.size(), m)};
  std::vector<AbHom> action;
  action.reserve(r.rank());
  for (int g = 0; g < y.group().order(); ++g) {
    IntMat mat(y.size(), y.size());
    for (int pt = 0; pt < y.size(); ++pt) mat.at(y.apply(g, pt), pt) = 1;
    action.push_back(AbHom(under, under, mat));
  }
  return FinModule(r, under, std::move(action), Side::left);
}

FinModule induced_module(Int m, const FinGroup& g, const std::vector<int>& h) {
  return permutation_module(m, GSet::cosets(g, h));
}

FinModule side_swap(const FinModule& m) {
  if (!m.ring().group_info())
    throw std::invalid_argument("side swap needs a group ring");
  const FinGroup& g = m.ring().group_info()->basis_group;
  std::vector<AbHom> action;
  action.reserve(m.ring().rank());
  for (int i = 0; i < m.ring().rank(); ++i)
    action.push_back(m.action_gen(g.inverse(i)));
  return FinModule(m.ring(), m.group(), std::move(action),
                   m.side() == Side::left ? Side::right : Side::left);
}

FinModule restrict_module(const FinModule& m, const SubgroupView& h) {
  if (!m.ring().group_info())
    throw std::invalid_argument("restriction needs a group ring");
  const Int mod = m.ring().group_info()->modulus;
  FiniteRing rh = group_ring(mod, h.group);
  std::vector<AbHom> action;
  action.reserve(rh.rank());
  for (int i = 0; i < rh.rank(); ++i) action.push_back(m.action_gen(h.embed[i]));
  return FinModule(rh, m.group(), std::move(action), m.side());
}

// ---------------------------------------------------------------------------

ModuleSum module_direct_sum(const FiniteRing& ring, Side side,
                            const std::vector<FinModule>& parts) {
  std::vector<FinAbGroup> groups;
  groups.reserve(parts.size());
  for (const auto& p : parts) {
    if (!(p.ring() == ring) || p.side() != side)
      throw std::invalid_argument("direct sum parts must share ring and side");
    groups.push_back(p.group());
  }
  DirectSum ds = direct_sum(groups);
  std::vector<AbHom> action;
  action.reserve(ring.rank());
  for (int i = 0; i < ring.rank(); ++i) {
    AbHom acc = AbHom::zero(ds.sum, ds.sum);
    for (size_t b = 0; b < parts.size(); ++b)
      acc = hom_add(acc,
                    compose(ds.inj[b], compose(parts[b].action_gen(i), ds.proj[b])));
    action.push_back(acc);
  }
  FinModule sum(ring, ds.sum, std::move(action), side);
  std::vector<ModHom> inj, proj;
  for (size_t b = 0; b < parts.size(); ++b) {
    inj.push_back(ModHom(parts[b], sum, ds.inj[b]));
    proj.push_back(ModHom(sum, parts[b], ds.proj[b]));
  }
  return ModuleSum{std::move(sum), std::move(inj), std::move(proj), std::move(ds)};
}

ModuleKio module_kio(const ModHom& f) {
  HomKio kio = hom_kio(f.hom());
  const FinModule& src = f.source();
  const FinModule& tgt = f.target();
  FinModule kernel(src.ring(), kio.kernel, restrict_actions(kio.kernel_incl, src),
                   src.side());
  FinModule image(src.ring(), kio.image, restrict_actions(kio.image_incl, tgt),
                  src.side());
  FinModule cokernel(src.ring(), kio.cokernel,
                     descend_actions(kio.cokernel_proj, tgt), src.side());
  return ModuleKio{kernel, ModHom(kernel, src, kio.kernel_incl),
                   image,  ModHom(image, tgt, kio.image_incl),
                   cokernel, ModHom(tgt, cokernel, kio.cokernel_proj)};
}

Submodule submodule_generated(const FinModule& m, const std::vector<GroupElem>& gens) {
  const int t = static_cast<int>(gens.size());
  for (const auto& v : gens)
    if (!m.group().is_valid(v))
      throw std::invalid_argument("submodule generator is not a module element");
  std::vector<FinModule> copies(t, ring_as_module(m.ring(), m.side()));
  ModuleSum free = module_direct_sum(m.ring(), m.side(), copies);
  // Component c sends r to r . v_c; its matrix column i is e_i . v_c.
  std::vector<AbHom> comps;
  comps.reserve(t);
  for (int c = 0; c < t; ++c) {
    IntMat mat(m.group().rank(), m.ring().rank());
    for (int i = 0; i < m.ring().rank(); ++i)
      mat.set_col(i, m.action_gen(i).apply(gens[c]).residues);
    comps.push_back(AbHom(m.ring().add(), m.group(), mat));
  }
  ModHom span(free.sum, m, out_of_sum_to(m.group(), free.group_sum, comps));
  ModuleKio kio = module_kio(span);
  return Submodule{kio.image, kio.image_incl};
}

// ---------------------------------------------------------------------------

AbHom HomGroupZ::to_hom(const GroupElem& h) const {
  IntMat mat(b.rank(), a.rank());
  for (size_t k = 0; k < basis_p.size(); ++k) {
    GroupElem c = sum.proj[k].apply(h);
    mat.at(basis_p[k], basis_q[k]) = checked_mul(basis_scale[k], c.residues[0]);
  }
  return AbHom(a, b, mat);
}

GroupElem HomGroupZ::from_hom(const AbHom& f) const {
  if (f.source() != a || f.target() != b)
    throw std::invalid_argument("coordinate extraction shape mismatch");
  GroupElem h = group.zero();
  for (size_t k = 0; k < basis_p.size(); ++k) {
    Int entry = f.matrix().at(basis_p[k], basis_q[k]);
    if (entry % basis_scale[k] != 0)
      throw std::logic_error("well-defined hom must have scaled entries");
    GroupElem c{{pos_mod(entry / basis_scale[k], basis_g[k])}};
    h = group.add(h, sum.inj[k].apply(c));
  }
  return h;
}

HomGroupZ hom_group_z(const FinAbGroup& a, const FinAbGroup& b) {
  HomGroupZ out;
  out.a = a;
  out.b = b;
  std::vector<FinAbGroup> cyclics;
  for (int p = 0; p < b.rank(); ++p)
    for (int q = 0; q < a.rank(); ++q) {
      Int g = gcd_ll(a.invariant_factors()[q], b.invariant_factors()[p]);
      if (g <= 1) continue;
      out.basis_p.push_back(p);
      out.basis_q.push_back(q);
      out.basis_g.push_back(g);
      out.basis_scale.push_back(b.invariant_factors()[p] / g);
      cyclics.push_back(FinAbGroup::cyclic(g));
    }
  out.sum = direct_sum(cyclics);
  out.group = out.sum.sum;
  return out;
}

ModHom HomRGroup::to_modhom(const GroupElem& h) const {
  return ModHom(m, n, homz.to_hom(incl.apply(h)));
}

GroupElem HomRGroup::from_modhom(const ModHom& f) const {
  GroupElem z = homz.from_hom(f.hom());
  auto h = solve_hom(incl, z);
  if (!h) throw std::invalid_argument("map is not in the module hom group");
  return *h;
}

HomRGroup hom_r_group(const FinModule& m, const FinModule& n) {
  if (!(m.ring() == n.ring()) || m.side() != n.side())
    throw std::invalid_argument("hom group requires a common ring and side");
  HomGroupZ homz = hom_group_z(m.group(), n.group());
  const int r = m.ring().rank();
  std::vector<FinAbGroup> copies(r, homz.group);
  DirectSum stack = direct_sum(copies);
  IntMat mat(stack.sum.rank(), homz.group.rank());
  for (int k = 0; k < homz.group.rank(); ++k) {
    AbHom fk = homz.to_hom(unit(homz.group, k));
    GroupElem col = stack.sum.zero();
    for (int i = 0; i < r; ++i) {
      AbHom defect = hom_sub(compose(fk, m.action_gen(i)),
                             compose(n.action_gen(i), fk));
      col = stack.sum.add(col, stack.inj[i].apply(homz.from_hom(defect)));
    }
    mat.set_col(k, col.residues);
  }
  AbHom constraint(homz.group, stack.sum, mat);
  HomKio kio = hom_kio(constraint);
  return HomRGroup{kio.kernel, std::move(homz), kio.kernel_incl, m, n};
}

std::vector<ModHom> enumerate_modhoms(const FinModule& m, const FinModule& n,
                                      Int cap) {
  HomRGroup hg = hom_r_group(m, n);
  std::vector<ModHom> out;
  for (const auto& h : hg.group.elements(cap)) out.push_back(hg.to_modhom(h));
  return out;
}

std::optional<ModHom> module_iso_search(const FinModule& m, const FinModule& n,
                                        Int cap) {
  if (m.group().invariant_factors() != n.group().invariant_factors())
    return std::nullopt;
  for (auto& f : enumerate_modhoms(m, n, cap))
    if (is_isomorphism(f.hom())) return f;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

OrbitDecomposition orbit_decomposition(Int m, const GSet& y) {
  auto orbits = y.orbits();
  std::vector<FinModule> orbit_modules;
  orbit_modules.reserve(orbits.size());
  for (const auto& o : orbits)
    orbit_modules.push_back(permutation_module(m, orbit_gset(y, o)));
  FiniteRing ring = group_ring(m, y.group());
  ModuleSum sum = module_direct_sum(ring, Side::left, orbit_modules);
  FinModule whole = permutation_module(m, y);
  IntMat mat(sum.sum.group().rank(), whole.group().rank());
  for (size_t k = 0; k < orbits.size(); ++k)
    for (size_t pos = 0; pos < orbits[k].size(); ++pos) {
      int pt = orbits[k][pos];
      GroupElem local = unit(orbit_modules[k].group(), static_cast<int>(pos));
      mat.set_col(pt, sum.inj[k].apply(local).residues);
    }
  ModHom witness(whole, sum.sum, AbHom(whole.group(), sum.sum.group(), mat));
  if (!is_isomorphism(witness.hom()))
    throw std::logic_error("orbit decomposition witness must be bijective");
  return OrbitDecomposition{std::move(orbits), std::move(orbit_modules),
                            std::move(sum), std::move(witness)};
}

// ---------------------------------------------------------------------------

FinModule dual_module(const FinModule& m) {
  FinAbGroup d = dual_group(m.group());
  std::vector<AbHom> action;
  action.reserve(m.ring().rank());
  for (int i = 0; i < m.ring().rank(); ++i) action.push_back(dual_hom(m.action_gen(i)));
  return FinModule(m.ring(), d, std::move(action),
                   m.side() == Side::left ? Side::right : Side::left);
}

ModHom dual_modhom(const ModHom& f) {
  return ModHom(dual_module(f.target()), dual_module(f.source()), dual_hom(f.hom()));
}

// ---------------------------------------------------------------------------

FunctorSpec FunctorSpec::hom_z(Int n) {
  if (n < 1) throw std::invalid_argument("hom functor modulus must be >= 1");
  return FunctorSpec{Kind::hom_z, n, std::nullopt};
}

FunctorSpec FunctorSpec::tensor_z(Int n) {
  if (n < 1) throw std::invalid_argument("tensor functor modulus must be >= 1");
  return FunctorSpec{Kind::tensor_z, n, std::nullopt};
}

FunctorSpec FunctorSpec::hom_r(FinModule p) {
  return FunctorSpec{Kind::hom_r, 0, std::move(p)};
}

namespace {

ModHom scalar_modhom(const FinModule& m, Int c) {
  return ModHom(m, m, AbHom::scalar(m.group(), c));
}

FiniteRing hom_r_result_ring(const FiniteRing& r) {
  Int e = r.add().exponent();
  if (e < 2)
    throw std::invalid_argument("hom functor needs a ring of exponent >= 2");
  return cyclic_ring(e);
}

FinModule as_scalar_module(const FiniteRing& ring, const FinAbGroup& g) {
  std::vector<AbHom> action(1, AbHom::identity(g));
  return FinModule(ring, g, std::move(action), Side::left);
}

}  // namespace

FinModule lift_functor_apply(const FunctorSpec& f, const FinModule& m) {
  switch (f.kind) {
    case FunctorSpec::Kind::hom_z:
      return module_kio(scalar_modhom(m, f.n)).kernel;
    case FunctorSpec::Kind::tensor_z:
      return module_kio(scalar_modhom(m, f.n)).cokernel;
    case FunctorSpec::Kind::hom_r: {
      HomRGroup hg = hom_r_group(*f.p, m);
      return as_scalar_module(hom_r_result_ring(m.ring()), hg.group);
    }
  }
  throw std::invalid_argument("unsupported functor tag");
}

ModHom lift_functor_hom(const FunctorSpec& f, const ModHom& g) {
  switch (f.kind) {
    case FunctorSpec::Kind::hom_z: {
      ModuleKio ka = module_kio(scalar_modhom(g.source(), f.n));
      ModuleKio kb = module_kio(scalar_modhom(g.target(), f.n));
      const FinAbGroup& src = ka.kernel.group();
      IntMat mat(kb.kernel.group().rank(), src.rank());
      for (int j = 0; j < src.rank(); ++j) {
        GroupElem moved = g.apply(ka.kernel_incl.apply(unit(src, j)));
        auto back = solve_hom(kb.kernel_incl.hom(), moved);
        if (!back) throw std::logic_error("torsion kernel must be preserved");
        mat.set_col(j, back->residues);
      }
      return ModHom(ka.kernel, kb.kernel,
                    AbHom(src, kb.kernel.group(), mat));
    }
    case FunctorSpec::Kind::tensor_z: {
      ModuleKio ka = module_kio(scalar_modhom(g.source(), f.n));
      ModuleKio kb = module_kio(scalar_modhom(g.target(), f.n));
      const FinAbGroup& src = ka.cokernel.group();
      IntMat mat(kb.cokernel.group().rank(), src.rank());
      for (int j = 0; j < src.rank(); ++j) {
        auto pre = solve_hom(ka.cokernel_proj.hom(), unit(src, j));
        if (!pre) throw std::logic_error("cokernel projection must be onto");
        mat.set_col(j, kb.cokernel_proj.apply(g.apply(*pre)).residues);
      }
      return ModHom(ka.cokernel, kb.cokernel,
                    AbHom(src, kb.cokernel.group(), mat));
    }
    case FunctorSpec::Kind::hom_r: {
      HomRGroup ha = hom_r_group(*f.p, g.source());
      HomRGroup hb = hom_r_group(*f.p, g.target());
      FinModule ma = as_scalar_module(hom_r_result_ring(g.source().ring()), ha.group);
      FinModule mb = as_scalar_module(hom_r_result_ring(g.target().ring()), hb.group);
      IntMat mat(hb.group.rank(), ha.group.rank());
      for (int j = 0; j < ha.group.rank(); ++j) {
        ModHom phi = ha.to_modhom(unit(ha.group, j));
        mat.set_col(j, hb.from_modhom(mod_compose(g, phi)).residues);
      }
      return ModHom(ma, mb, AbHom(ha.group, hb.group, mat));
    }
  }
  throw std::invalid_argument("unsupported functor tag");
}

}  // namespace stonemod
