//! Synthesis of a partitioning scheme on `ω^ω` from a countable base
//! `{B_k : k odd}` of a finer topology in which nonempty cylinders form a
//! π-base.
//!
//! The scheme is built by recursion on the length `k` of the node `a`, with
//! `V_⟨⟩ = ω^ω`:
//!
//! * even `k`, or odd `k` with `V_a ∩ B_k = ∅`: let `C` be the minimal
//!   cylinders inside `V_a` and `D = {c⌢d : c ∈ C, d ∈ ω^{k+1}}`; the children
//!   enumerate `{S_e : e ∈ D}` injectively;
//! * odd `k` with `V_a ∩ B_k ≠ ∅`: pick `c` with `S_c ⊊ V_a ∩ B_k`; then
//!   `V_{a⌢0} = V_a ∖ S_c` and `V_{a⌢n} = S_{c⌢(n−1)}` for `n ≥ 1`.
//!
//! Every node is a nonempty clopen, odd-length nodes are single cylinders
//! `S_d` with `lh(d) ≥ lh(a)`, and at odd `k` all children `n ≥ 1` lie in
//! `S_c ⊆ B_k`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::cylinders::{self, minimal_antichain, CylExpr, LazyAntichain};
use crate::report::Report;
use crate::schemes::{partitions_check, Scheme, SchemeError, Window};
use crate::seq::{diagonal, FinSeq, Nat};
use crate::space::BaireSpaceModel;

/// The base `k ↦ B_k` for odd `k`.
#[derive(Clone)]
pub struct LusinInput {
    name: String,
    base: Rc<dyn Fn(Nat) -> CylExpr>,
}

impl LusinInput {
    pub fn new(name: impl Into<String>, base: impl Fn(Nat) -> CylExpr + 'static) -> Self {
        LusinInput { name: name.into(), base: Rc::new(base) }
    }

    /// All cylinders in fair order: `B_{2i+1} = S_{from_code(i)}`.
    pub fn standard() -> Self {
        LusinInput::new("std", |k| CylExpr::cylinder(FinSeq::from_code((k - 1) / 2)))
    }

    /// A finite list of base sets, repeated cyclically: `B_{2i+1} = list[i mod len]`.
    pub fn cycling(name: impl Into<String>, list: Vec<CylExpr>) -> Self {
        assert!(!list.is_empty(), "a base needs at least one set");
        LusinInput::new(name, move |k| list[(((k - 1) / 2) % list.len() as Nat) as usize].clone())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `B_k`; `k` must be odd.
    pub fn base(&self, k: Nat) -> CylExpr {
        debug_assert!(k % 2 == 1, "base sets are indexed by odd numbers");
        (self.base)(k)
    }
}

impl core::fmt::Debug for LusinInput {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("LusinInput").field("name", &self.name).finish_non_exhaustive()
    }
}

/// How the children of one node are produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChildPlan {
    /// Children enumerate `{S_{c⌢d} : c ∈ antichain, lh(d) = ext_len}`.
    Partition { antichain: LazyAntichain, ext_len: usize },
    /// `V_{a⌢0} = V_a ∖ S_c`, `V_{a⌢n} = S_{c⌢(n−1)}`.
    Split { parent: CylExpr, witness: FinSeq },
}

impl ChildPlan {
    /// The partition step for a node of length `k` with value `v_a`.
    pub fn partition(v_a: &CylExpr, k: usize) -> Result<ChildPlan, SchemeError> {
        let antichain = minimal_antichain(v_a).map_err(|e| SchemeError::Rule {
            node: FinSeq::empty(),
            message: format!("{e}"),
        })?;
        Ok(ChildPlan::Partition { antichain, ext_len: k + 1 })
    }

    /// The odd step: split off a strict witness inside `v_a ∩ b_k`, or fall
    /// back to the partition step when they are disjoint.
    pub fn odd(v_a: &CylExpr, b_k: &CylExpr, k: usize) -> Result<ChildPlan, SchemeError> {
        match cylinders::strict_witness(&v_a.clone().intersect(b_k.clone())) {
            Some(witness) => Ok(ChildPlan::Split { parent: v_a.clone(), witness }),
            None => ChildPlan::partition(v_a, k),
        }
    }

    pub fn child(&self, n: Nat) -> CylExpr {
        match self {
            ChildPlan::Partition { antichain, ext_len } => {
                let (i, j) = match antichain.finite_len() {
                    Some(len) => {
                        let len = len as Nat;
                        (n % len, n / len)
                    }
                    None => diagonal::unpair(n),
                };
                let c = antichain.member(i).expect("antichain index in range");
                CylExpr::cylinder(c.concat(&FinSeq::from_code_fixed(j, *ext_len)))
            }
            ChildPlan::Split { parent, witness } => match n {
                0 => parent.clone().minus(CylExpr::cylinder(witness.clone())),
                n => CylExpr::cylinder(witness.append(n - 1)),
            },
        }
    }
}

struct Builder {
    input: LusinInput,
    plans: RefCell<BTreeMap<FinSeq, Rc<ChildPlan>>>,
}

impl Builder {
    fn plan(&self, scheme: &Scheme<BaireSpaceModel>, a: &FinSeq) -> Result<Rc<ChildPlan>, SchemeError> {
        if let Some(p) = self.plans.borrow().get(a) {
            return Ok(p.clone());
        }
        let v_a = scheme.try_node(a)?;
        let k = a.len();
        let plan = if k % 2 == 0 {
            ChildPlan::partition(&v_a, k)
        } else {
            ChildPlan::odd(&v_a, &self.input.base(k as Nat), k)
        }
        .map_err(|e| match e {
            SchemeError::Rule { message, .. } => SchemeError::Rule { node: a.clone(), message },
            e => e,
        })?;
        let plan = Rc::new(plan);
        self.plans.borrow_mut().insert(a.clone(), plan.clone());
        Ok(plan)
    }
}

/// The synthesized scheme together with the per-node construction data
/// needed to certify its conditions.
pub struct LusinScheme {
    builder: Rc<Builder>,
    scheme: Rc<Scheme<BaireSpaceModel>>,
}

/// Build the scheme lazily; nodes are produced on demand and memoized.
pub fn build_lusin(input: LusinInput) -> LusinScheme {
    let builder = Rc::new(Builder { input, plans: RefCell::new(BTreeMap::new()) });
    let b = builder.clone();
    let scheme = Scheme::new(BaireSpaceModel, move |scheme, a| match a.parent() {
        None => Ok(CylExpr::Full),
        Some(parent) => {
            let plan = b.plan(scheme, &parent)?;
            Ok(plan.child(a.last().expect("nonempty node")))
        }
    });
    LusinScheme { builder, scheme: Rc::new(scheme) }
}

impl LusinScheme {
    pub fn scheme(&self) -> &Scheme<BaireSpaceModel> {
        &self.scheme
    }

    pub fn shared(&self) -> Rc<Scheme<BaireSpaceModel>> {
        self.scheme.clone()
    }

    pub fn input(&self) -> &LusinInput {
        &self.builder.input
    }

    pub fn node(&self, a: &FinSeq) -> CylExpr {
        self.scheme.node(a)
    }

    pub fn plan(&self, a: &FinSeq) -> Result<Rc<ChildPlan>, SchemeError> {
        self.builder.plan(&self.scheme, a)
    }

    /// [`lusin_conditions_check`] plus the construction certificate: at odd
    /// nodes meeting `B_k` the plan must be a split whose witness satisfies
    /// `S_c ⊆ B_k`, which places every child `n ≥ 1` inside `B_k` at once.
    pub fn conditions_check(&self, window: &Window) -> Report {
        let mut report = lusin_conditions_check(&self.scheme, self.input(), window);
        let Some(depth) = window.depth() else { return report };
        for a in window.nodes() {
            let k = a.len();
            if k % 2 == 0 || k > depth {
                continue;
            }
            let b_k = self.input().base(k as Nat);
            let meets = cylinders::intersects(&self.node(&a), &b_k);
            let plan = match self.plan(&a) {
                Ok(p) => p,
                Err(e) => {
                    report.expect("lusin.certificate", Some(&a), false, format!("{e}"));
                    continue;
                }
            };
            match (&*plan, meets) {
                (ChildPlan::Split { witness, .. }, true) => report.expect(
                    "lusin.certificate",
                    Some(&a),
                    cylinders::subset(&CylExpr::cylinder(witness.clone()), &b_k),
                    format!("S_{witness} ⊄ B_{k}"),
                ),
                (ChildPlan::Partition { .. }, false) => report.pass("lusin.certificate", Some(&a)),
                _ => report.expect("lusin.certificate", Some(&a), false, "plan does not match V_a ∩ B_k"),
            }
        }
        report
    }
}

impl core::fmt::Debug for LusinScheme {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("LusinScheme")
            .field("input", &self.builder.input)
            .field("scheme", &self.scheme)
            .finish()
    }
}

/// Window check of the construction's conditions on any Baire-model scheme:
///
/// * `lusin.nonempty`: every node is nonempty;
/// * `lusin.cylinder`: odd-length nodes are `S_d` with `lh(d) ≥ lh(a)`;
/// * `lusin.refine`: at odd `k` with `V_a ∩ B_k ≠ ∅`, children `1 ≤ n < m`
///   lie in `B_k`;
///
/// together with [`partitions_check`].
pub fn lusin_conditions_check(
    v: &Scheme<BaireSpaceModel>,
    input: &LusinInput,
    window: &Window,
) -> Report {
    let mut report = partitions_check(v, window);
    for a in window.nodes() {
        let va = match v.try_node(&a) {
            Ok(x) => x,
            Err(_) => continue, // already reported by partitions_check
        };
        report.expect("lusin.nonempty", Some(&a), !cylinders::is_empty(&va), format!("V_{a} = ∅"));
        let k = a.len();
        if k % 2 == 1 {
            let ok = cylinders::single_cylinder(&va).is_some_and(|d| d.len() >= k);
            report.expect("lusin.cylinder", Some(&a), ok, format!("V_{a} = {va} is not S_d with lh(d) ≥ {k}"));
            let b_k = input.base(k as Nat);
            if cylinders::intersects(&va, &b_k) {
                let stray = (1..window.breadth()).find(|&n| {
                    v.try_node(&a.append(n)).is_ok_and(|vc| !cylinders::subset(&vc, &b_k))
                });
                report.expect(
                    "lusin.refine",
                    Some(&a),
                    stray.is_none(),
                    format!("child {} of {a} leaves B_{k}", stray.unwrap_or(0)),
                );
            }
        }
    }
    report
}
