//! The relabelled scheme `V^g_a := V_{g∘a}` and window checks of the
//! identities it satisfies when `g` is a surjection.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::rc::Rc;
use alloc::vec::Vec;

use super::{covers_check, fruit_approx, pi_net_probe, Scheme, Window};
use crate::report::{Report, Status};
use crate::seq::{BranchRule, FinSeq, Nat, NatMap};
use crate::space::SpaceModel;

/// `a ↦ V_{g∘a}`, memoized independently of `v`.
pub fn transform_g<M>(v: Rc<Scheme<M>>, g: NatMap) -> Scheme<M>
where
    M: SpaceModel + Clone + 'static,
{
    let space = v.space().clone();
    Scheme::new(space, move |_, a| v.try_node(&g.compose(a)))
}

/// Preimages of window values are searched among `n < 2·breadth + 2`.
fn preimage_search(window: &Window) -> Nat {
    2 * window.breadth() + 2
}

/// Window form of the three identities for a surjection `g`:
///
/// * `perm.index`: `{g∘(a⌢c)} = {(g∘a)⌢c}` restricted to the window;
/// * `perm.union`: `⋃_n V_{(g∘a)⌢n} = ⋃_n V_{g∘(a⌢n)}` over children in the
///   window;
/// * `perm.fruit`: `⋂_k V_{g∘(q↾k)} = ⋂_k V_{(g∘q)↾k}` for `q = a⌢0⌢0⌢…`.
///
/// A `g` that misses some window value is reported as a precondition breach.
pub fn perm_identity_check<M: SpaceModel>(v: &Scheme<M>, g: &NatMap, window: &Window) -> Report {
    let mut report = Report::new();
    let Some(depth) = window.depth() else { return report };
    let m = window.breadth();
    let search = preimage_search(window);
    if let Some(missing) = (0..m).find(|&x| g.preimage(x, search).is_none()) {
        report.push(
            "perm.surjective",
            None,
            Status::Breach,
            format!("{} has no preimage of {missing} below {search}", g.name()),
        );
        return report;
    }
    let space = v.space();
    for a in window.nodes() {
        let ga = g.compose(&a);
        let rest = depth - a.len();

        let lhs: BTreeSet<FinSeq> = FinSeq::window(rest, search)
            .into_iter()
            .map(|c| g.compose(&a.concat(&c)))
            .filter(|s| s.entries()[a.len()..].iter().all(|&x| x < m))
            .collect();
        let rhs: BTreeSet<FinSeq> =
            FinSeq::window(rest, m).into_iter().map(|c| ga.concat(&c)).collect();
        report.expect("perm.index", Some(&a), lhs == rhs, "index sets differ");

        let left = (0..m).fold(space.empty(), |acc, n| space.union(&acc, &v.node(&ga.append(n))));
        let right = (0..search)
            .filter(|&n| g.apply(n) < m)
            .fold(space.empty(), |acc, n| space.union(&acc, &v.node(&g.compose(&a.append(n)))));
        report.expect("perm.union", Some(&a), space.equal(&left, &right), "partial unions differ");

        let q = BranchRule::extending(&a, 0);
        let gq = g.compose_branch(&q);
        let via_prefixes = (0..=depth).fold(space.whole(), |acc, k| {
            space.intersect(&acc, &v.node(&g.compose(&q.restrict(k))))
        });
        let via_branch = fruit_approx(v, &gq, depth);
        report.expect(
            "perm.fruit",
            Some(&a),
            space.equal(&via_prefixes, &via_branch),
            "fruit approximations differ",
        );
    }
    report
}

/// Window evidence that `V^g` inherits covering, openness, fruits and the
/// π-net property from `V`:
///
/// * `vg.covers`: if `V` has no hard covering violation, neither has `V^g`;
/// * `vg.open`: every `V^g_a` is the node `V_{g∘a}`;
/// * `vg.fruit`: `⋂_{k≤d} V^g_{q↾k} = ⋂_{k≤d} V_{(g∘q)↾k}` for `q = a⌢0⌢…`;
/// * `vg.pi_net`: each π-net probe hit `b ⊒ g∘a` for `V` is translated back
///   to `a' ⊒ a` with `g∘a' = b`, and `V^g_{a'}` is checked to be a nonempty
///   subset of the target.
pub fn vg_window_checks<M>(v: Rc<Scheme<M>>, g: &NatMap, window: &Window, budget: Nat) -> Report
where
    M: SpaceModel + Clone + 'static,
{
    let mut report = Report::new();
    let Some(depth) = window.depth() else { return report };
    let vg = transform_g(v.clone(), g.clone());
    let space = v.space().clone();
    let search = preimage_search(window);

    let base_ok = covers_check(&v, window).is_clean();
    let vg_covers = covers_check(&vg, window);
    report.expect(
        "vg.covers",
        None,
        !base_ok || vg_covers.is_clean(),
        format!("{} hard covering failures in V^g", vg_covers.hard_failures().count()),
    );

    for a in window.nodes() {
        let ga = g.compose(&a);
        report.expect("vg.open", Some(&a), vg.node(&a) == v.node(&ga), "node not drawn from V");

        let q = BranchRule::extending(&a, 0);
        let lhs = fruit_approx(&vg, &q, depth);
        let rhs = fruit_approx(&v, &g.compose_branch(&q), depth);
        report.expect("vg.fruit", Some(&a), space.equal(&lhs, &rhs), "fruits differ");

        for n in 0..window.breadth() {
            let target = v.node(&ga.append(n));
            if space.is_empty(&target) {
                continue;
            }
            let hit = match pi_net_probe(&v, &ga, &target, budget) {
                Ok(Some(b)) => b,
                Ok(None) => {
                    report.push("vg.pi_net", Some(&a), Status::Unresolved, "no hit for V within budget");
                    continue;
                }
                Err(e) => {
                    report.push("vg.pi_net", Some(&a), Status::Violation, format!("{e}"));
                    continue;
                }
            };
            let tail: Option<Vec<Nat>> =
                hit.entries()[ga.len()..].iter().map(|&x| g.preimage(x, search.max(x + 1) * 2)).collect();
            let Some(tail) = tail else {
                report.push("vg.pi_net", Some(&a), Status::Breach, format!("no preimage for {hit}"));
                continue;
            };
            let lifted = a.concat(&FinSeq::from(tail));
            let w = vg.node(&lifted);
            report.expect(
                "vg.pi_net",
                Some(&lifted),
                !space.is_empty(&w) && space.subset(&w, &target),
                format!("V^g_{lifted} does not refine the target"),
            );
        }
    }
    report
}
