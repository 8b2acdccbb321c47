// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "charinv/catalog.hpp"
#include "charinv/cocycle.hpp"
#include "charinv/duality.hpp"
#include "charinv/nu_extend.hpp"
#include "charinv/pair.hpp"
#include "oracles.hpp"

using namespace charinv;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (out.ok && secs > budget_s) {
    out.ok = false;
    out.detail += " [over time budget " + std::to_string(budget_s) + " s]";
  }
  if (!out.ok) ++failures;
  std::printf("%s criterion %2d %-28s %8.3f s  %s\n", out.ok ? "PASS" : "FAIL", id, name.c_str(), secs,
              out.detail.c_str());
  std::fflush(stdout);
}

std::string shape(const FiniteGroup& g, const Subgroup& h) {
  return "|G|=" + std::to_string(g.order()) + " |H|=" + std::to_string(h.size());
}

/// The shared catalog of criteria 2 and 3.
template <class Body>
void for_each_catalog_context(Body&& body) {
  const std::vector<FiniteGroup> gs{catalog::cyclic(2), catalog::cyclic(4), catalog::abelian({2, 2})};
  const std::vector<AbelianGroup> ks{AbelianGroup({2}), AbelianGroup({2, 2})};
  for (auto& g : gs)
    for (auto& h : normal_subgroups(g))
      for (auto& k : ks)
        for (auto& kappa : enumerate_bicharacters(k))
          for (auto& nu : enumerate_nus(g, h, k)) body(make_context(nu, kappa));
}

Outcome relation_suite() {
  Outcome o;
  std::size_t contexts = 0, rejected = 0, accepted = 0;
  for (auto& [name, g] : catalog::groups_up_to_order_8())
    for (auto& h : normal_subgroups(g)) {
      AbelianGroup k({2});
      auto ctx = make_context(trivial_nu(g, h, k), trivial_bicharacter(k));
      ++contexts;
      const auto base = trivial_pair(ctx, 1);
      o.require(oracle::failing_relations(*ctx, base.lambda(), base.mu()).empty(), "trivial pair rejected by oracle");
      const std::int64_t m = 2 * static_cast<std::int64_t>(g.order());
      const std::size_t ng = g.order(), nh = h.size();
      for (std::size_t slot = 0; slot < ng * nh + nh * nh; ++slot)
        for (std::int64_t v = 1; v < m; ++v) {
          PhaseFunction lam({ng, nh}, m), mu({nh, nh}, m);
          if (slot < ng * nh)
            lam.set_exponent(slot / nh, slot % nh, v);
          else
            mu.set_exponent((slot - ng * nh) / nh, (slot - ng * nh) % nh, v);
          const auto expect = oracle::failing_relations(*ctx, lam, mu);
          try {
            validate_pair(ctx, lam, mu);
            o.require(expect.empty(), name + ": accepted a perturbation violating the relations");
            ++accepted;
          } catch (const Error& e) {
            o.require(e.code() == Errc::RelationFails, name + ": wrong error code");
            o.require(!e.witness().empty() && expect.count(static_cast<int>(e.witness()[0])),
                      name + ": named relation is not violated");
            std::set<int> named;
            for (auto& f : check_pair(*ctx, lam, mu).failures) named.insert(f.relation);
            o.require(named == expect, name + ": failing relation set differs from oracle");
            ++rejected;
          }
        }
    }
  o.detail = std::to_string(contexts) + " (G,H) pairs, " + std::to_string(rejected) + " perturbations rejected, " +
             std::to_string(accepted) + " valid ones accepted";
  return o;
}

Outcome untwist_soundness() {
  Outcome o;
  std::size_t contexts = 0, pairs = 0, skipped_ctx = 0, skipped_pairs = 0;
  for_each_catalog_context([&](const ContextPtr& ctx) {
    ++contexts;
    const auto classes = enumerate_lambda_group(ctx, 4);
    const auto cert = decide_extension(ctx->nu);
    if (!cert.extends) {
      ++skipped_ctx;
      skipped_pairs += classes.size();
      return;
    }
    for (auto& c : classes) {
      ++pairs;
      const auto u = untwist(c.representative, *cert.witness);
      o.require(u.context().kappa.is_trivial(), "untwist did not land in the trivial-kappa context");
      o.require(oracle::failing_relations(u.context(), u.lambda(), u.mu()).empty(),
                shape(ctx->group(), ctx->subgroup()) + ": untwist output fails a classical relation");
      o.require(twist(u, ctx, *cert.witness) == c.representative, "twist after untwist is not the identity");
    }
  });
  o.detail = std::to_string(contexts) + " contexts, " + std::to_string(pairs) + " pairs checked; " +
             std::to_string(skipped_ctx) + " contexts (" + std::to_string(skipped_pairs) +
             " pairs) skipped: nu does not extend";
  return o;
}

Outcome bar_soundness() {
  Outcome o;
  std::size_t pairs = 0, identity_checks = 0;
  for_each_catalog_context([&](const ContextPtr& ctx) {
    const auto cert = decide_extension(ctx->nu);
    if (!cert.extends) return;
    for (auto& c : enumerate_lambda_group(ctx, 4)) {
      ++pairs;
      const auto b = bar_transform(c.representative, *cert.witness);
      o.require(b.context().kappa.is_trivial(), "bar output not in the classical context");
      o.require(oracle::failing_relations(b.context(), b.lambda(), b.mu()).empty(),
                "bar output fails a classical relation");
      if (ctx->kappa.is_trivial()) {
        ++identity_checks;
        o.require(b.lambda() == c.representative.lambda() && b.mu() == c.representative.mu(),
                  "bar with trivial kappa is not the identity");
      }
    }
  });
  o.detail = std::to_string(pairs) + " pairs, " + std::to_string(identity_checks) + " trivial-kappa identity checks";
  return o;
}

Outcome extension_decision() {
  Outcome o;
  std::size_t cases = 0, extend = 0;
  const std::vector<AbelianGroup> ks{AbelianGroup({2}), AbelianGroup({3}), AbelianGroup({4}), AbelianGroup({2, 2})};
  for (auto& [name, g] : catalog::groups_up_to_order_8())
    for (auto& h : normal_subgroups(g))
      for (auto& k : ks)
        for (auto& nu : enumerate_nus(g, h, k)) {
          ++cases;
          const auto fast = decide_extension(nu), slow = decide_extension_oracle(nu);
          o.require(fast.extends == slow.extends, name + ": decision disagrees with exhaustive search");
          if (fast.extends) {
            ++extend;
            const auto& f = *fast.witness;
            bool hom = true;
            for (Element a = 0; a < g.order(); ++a)
              for (Element b = 0; b < g.order(); ++b) hom &= f(g.mul(a, b)) == k.add(f(a), f(b));
            bool restricts = true;
            for (std::size_t i = 0; i < h.size(); ++i) restricts &= f(h.at(i)) == nu.map().values[i];
            o.require(hom && restricts, name + ": extension witness is not a restricting homomorphism");
          } else {
            o.require(fast.obstruction.kind != ObstructionKind::None, name + ": no obstruction reported");
          }
        }
  o.detail = std::to_string(cases) + " (G,H,K,nu), " + std::to_string(extend) + " extend, 0 disagreements";
  return o;
}

Outcome bezout() {
  Outcome o;
  std::size_t pairs = 0;
  for (std::int64_t p = 1; p <= 50; ++p)
    for (std::int64_t n = 1; n <= 50; ++n) {
      if (std::gcd(p, n) != 1) continue;
      ++pairs;
      const auto e = bezout_extension(p, n);
      o.require(p * e.k + n * e.l == 1, "p*k + n*l != 1");
      o.require(((p * e.k) % n + n) % n == 1 % n, "p*k != 1 mod n");
      for (std::int64_t m = 0; m < n; ++m) o.require(((p * m * e.k) % n + n) % n == m, "nu(p*m) != m");
    }
  const auto c = bezout_extension(2, 3);
  o.require(c.k == 2 && c.l == -1, "p=2, n=3 certificate is not (2,-1)");
  o.detail = std::to_string(pairs) + " coprime pairs; (2,3) -> (k,l)=(" + std::to_string(c.k) + "," +
             std::to_string(c.l) + ")";
  return o;
}

Outcome semidirect() {
  Outcome o;
  std::size_t invariant = 0, rejected = 0;
  const std::vector<AbelianGroup> ks{AbelianGroup({2}), AbelianGroup({3}), AbelianGroup({2, 2})};
  const auto cat = catalog::groups_up_to_order_6();
  for (auto& [hn, h] : cat) {
    const auto aut = automorphism_group(h);
    for (auto& [qn, q] : cat)
      for (auto& act_hom : enumerate_homs(q, aut.group)) {
        std::vector<std::vector<Element>> act;
        for (Element s = 0; s < q.order(); ++s) act.push_back(aut.elements[act_hom(s)].image());
        for (auto& k : ks)
          for (auto& f : enumerate_homs(h, k.as_group())) {
            bool inv = true;
            for (Element s = 0; s < q.order(); ++s)
              for (Element x = 0; x < h.order(); ++x) inv &= f(act[s][x]) == f(x);
            const std::string where = hn + " x| " + qn;
            try {
              const auto ext = semidirect_extension(h, q, act, k, f.image());
              o.require(inv, where + ": accepted a non-invariant nu_H");
              ++invariant;
              const auto& g = ext.group;
              const auto& w = *ext.certificate.witness;
              bool hom = true;
              for (Element a = 0; a < g.order(); ++a)
                for (Element b = 0; b < g.order(); ++b) hom &= w(g.mul(a, b)) == k.add(w(a), w(b));
              bool restricts = true;
              for (std::size_t i = 0; i < ext.normal.size(); ++i)
                restricts &= w(ext.normal.at(i)) == f(ext.normal.at(i) % h.order());
              o.require(hom && restricts && is_normal(g, ext.normal), where + ": extension fails re-verification");
            } catch (const Error& e) {
              o.require(!inv, where + ": rejected an invariant nu_H: " + e.what());
              o.require(e.code() == Errc::NotActInvariant, where + ": wrong error code");
              const auto& wt = e.witness();
              o.require(wt.size() == 2 && f(act[wt[0]][wt[1]]) != f(wt[1]), where + ": witness does not violate");
              ++rejected;
            }
          }
      }
  }
  o.detail = std::to_string(invariant) + " extensions verified, " + std::to_string(rejected) +
             " NotActInvariant with witness";
  return o;
}

Outcome coboundary_witness() {
  Outcome o;
  std::size_t count = 0;
  bool z2_order4 = false;
  for (auto orders : std::vector<std::vector<std::int64_t>>{{2}, {3}, {4}, {2, 2}, {6}}) {
    AbelianGroup k(orders);
    const auto& g = k.as_group();
    for (auto& mu : enumerate_cocycles(g, k.exponent(), true)) {
      ++count;
      const auto w = symmetric_witness(k, mu);
      for (Element a = 0; a < g.order(); ++a)
        for (Element b = 0; b < g.order(); ++b) {
          const auto lhs = oracle::frac(w.c.at(a)) + oracle::frac(w.c.at(b)) - oracle::frac(w.c.at(g.mul(a, b)));
          o.require(lhs == oracle::frac(mu(a, b)), describe(k) + ": witness does not bound mu");
        }
      o.require(w.c.at(0).is_one(), "witness not normalized");
      if (orders == std::vector<std::int64_t>{2} && !mu(1, 1).is_one()) z2_order4 = w.c.at(1).order() == 4;
    }
  }
  o.require(z2_order4, "Z/2 witness for mu(1,1)=-1 does not have c(1) of order 4");
  o.detail = std::to_string(count) + " symmetric cocycles bounded; Z/2 case c(1) of order 4";
  return o;
}

Outcome kappa_twist() {
  Outcome o;
  std::size_t cocycles = 0, coboundary_checks = 0, symmetric_pairs = 0;
  for (auto orders : std::vector<std::vector<std::int64_t>>{{2}, {2, 2}, {4}}) {
    AbelianGroup k(orders);
    const auto& g = k.as_group();
    const auto kappas = enumerate_bicharacters(k);
    for (std::int64_t m = 1; m <= 4; ++m) {
      const auto all = enumerate_cocycles(g, m);
      for (auto& mu : all) {
        ++cocycles;
        const auto anti = antisymmetrize(k, mu);
        for (Element a = 0; a < g.order(); ++a)
          for (Element b = 0; b < g.order(); ++b)
            for (Element c = 0; c < g.order(); ++c) {
              o.require(oracle::frac(anti(g.mul(a, b), c)) == oracle::frac(anti(a, c)) + oracle::frac(anti(b, c)),
                        "antisymmetrization not multiplicative on the left");
              o.require(oracle::frac(anti(a, g.mul(b, c))) == oracle::frac(anti(a, b)) + oracle::frac(anti(a, c)),
                        "antisymmetrization not multiplicative on the right");
            }
      }
      // every normalized cochain c gives a coboundary
      std::uint64_t nc = 1;
      for (std::size_t i = 1; i < g.order(); ++i) nc *= static_cast<std::uint64_t>(m);
      for (std::uint64_t idx = 0; idx < nc; ++idx) {
        std::vector<std::int64_t> c(g.order(), 0);
        std::uint64_t r = idx;
        for (std::size_t i = 1; i < g.order(); ++i, r /= static_cast<std::uint64_t>(m))
          c[i] = static_cast<std::int64_t>(r % static_cast<std::uint64_t>(m));
        const auto d = coboundary(g, PhaseFunction::from_exponents({g.order()}, m, c));
        for (auto& kappa : kappas) {
          ++coboundary_checks;
          const auto t = twist_kappa(kappa, d);
          for (Element a = 0; a < g.order(); ++a)
            for (Element b = 0; b < g.order(); ++b)
              o.require(t(a, b) == kappa(a, b), "twist by a coboundary changed kappa");
        }
      }
      for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i; j < all.size(); ++j) {
          bool sym = true;
          for (Element a = 0; a < g.order() && sym; ++a)
            for (Element b = 0; b < g.order() && sym; ++b)
              sym = oracle::frac(all[i](a, b)) - oracle::frac(all[j](a, b)) ==
                    oracle::frac(all[i](b, a)) - oracle::frac(all[j](b, a));
          if (!sym) continue;
          ++symmetric_pairs;
          for (auto& kappa : kappas) {
            const auto x = twist_kappa(kappa, all[i]), y = twist_kappa(kappa, all[j]);
            for (Element a = 0; a < g.order(); ++a)
              for (Element b = 0; b < g.order(); ++b) o.require(x(a, b) == y(a, b), "symmetric ratio changes twist");
          }
        }
    }
  }
  o.detail = std::to_string(cocycles) + " cocycles, " + std::to_string(coboundary_checks) + " coboundary twists, " +
             std::to_string(symmetric_pairs) + " symmetric-ratio pairs";
  return o;
}

Outcome cyclic_identity() {
  Outcome o;
  std::size_t checks = 0;
  for (std::int64_t n = 1; n <= 12; ++n) {
    AbelianGroup k({n});
    for (auto& kappa : enumerate_bicharacters(k))
      for (Element g = 0; g < k.order(); ++g) {
        if (std::gcd(static_cast<std::int64_t>(g), n) != 1 && n > 1) continue;
        for (std::int64_t a = -n; a < 2 * n; ++a)
          for (std::int64_t b = -n; b < 2 * n; ++b) {
            ++checks;
            o.require(cyclic_power_identity(kappa, g, a, b), "identity reported false");
            // direct evaluation
            const Element ga = static_cast<Element>(mod_floor(a * static_cast<std::int64_t>(g), n));
            const Element gb = static_cast<Element>(mod_floor(b * static_cast<std::int64_t>(g), n));
            const auto base = oracle::frac(kappa(g, g));
            const oracle::Frac rhs(mod_floor(a * b, base.den) * base.num, base.den);
            o.require(oracle::frac(kappa(ga, gb)) == rhs, "direct evaluation disagrees");
          }
      }
  }
  o.detail = std::to_string(checks) + " (kappa, g, m, n) checks";
  return o;
}

Outcome duality() {
  Outcome o;
  std::size_t checked = 0;
  for (auto orders : std::vector<std::vector<std::int64_t>>{{2}, {3}, {4}, {5}, {6}, {2, 2}, {2, 4}}) {
    AbelianGroup k(orders);
    const auto w = check_weyl(k), s = check_second_dual(k);
    o.require(w.ok() && s.ok(), describe(k) + ": violations reported");
    o.require(w.checked == k.order() * k.order() && s.checked == w.checked, "incomplete sweep");
    checked += w.checked + s.checked;
  }
  o.detail = std::to_string(checked) + " identities, 0 violations";
  return o;
}

std::pair<int, std::string> run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + CHARINV_CLI_PATH + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {status, out};
}

Outcome determinism() {
  Outcome o;
  const std::string dir = CHARINV_INSTANCE_DIR;
  std::vector<std::string> cmds;
  for (auto f : {"z2_twisted.json", "z4_sub2.json", "z4_sub2_k4.json", "s3_as_semidirect.json"}) {
    cmds.push_back("enumerate \"" + dir + "/" + f + "\"");
    cmds.push_back("enumerate \"" + dir + "/" + f + "\" --modulus 4");
  }
  cmds.push_back("classify \"" + dir + "/z2_twisted.json\" \"" + dir + "/z2_twisted_mu.json\"");
  cmds.push_back("classify \"" + dir + "/z2_twisted.json\" \"" + dir + "/z2_twisted_mu.json\" --modulus 4");
  std::size_t runs = 0;
  for (auto& c : cmds) {
    const auto ref = run_cli(c + " --jobs 1");
    ++runs;
    o.require(!ref.second.empty() && ref.second.front() == '{', c + ": no JSON output");
    for (auto jobs : {"1", "2", "4", "8"}) {
      const auto again = run_cli(c + " --jobs " + jobs);
      ++runs;
      o.require(again == ref, c + ": output differs with --jobs " + jobs);
    }
  }
  o.detail = std::to_string(runs) + " CLI runs over " + std::to_string(cmds.size()) + " commands, byte-identical";
  return o;
}

}  // namespace

int main() {
  criterion(1, "relation suite", 10, relation_suite);
  criterion(2, "untwist soundness", 300, untwist_soundness);
  criterion(3, "bar transformation", 120, bar_soundness);
  criterion(4, "extension decision", 300, extension_decision);
  criterion(5, "Bezout construction", 1, bezout);
  criterion(6, "semidirect construction", 30, semidirect);
  criterion(7, "coboundary witness", 120, coboundary_witness);
  criterion(8, "kappa twist", 120, kappa_twist);
  criterion(9, "cyclic identity", 5, cyclic_identity);
  criterion(10, "duality shadow", 5, duality);
  criterion(11, "determinism", 600, determinism);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
