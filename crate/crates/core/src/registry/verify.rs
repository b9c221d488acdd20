//! Comparing both sides of a case at one prime power.

use crate::modarith::{PrimePower, Residue};

use super::{CongruenceCase, Diagnostics, EvalContext, RegistryError, RhsInput, RhsValue, Status, VerificationRecord};

fn inapplicable(case: &CongruenceCase, pp: PrimePower, reason: String) -> VerificationRecord {
    VerificationRecord {
        case_id: case.id.clone(),
        p: pp.p(),
        a: pp.exponent(),
        modulus: case.kind.comparison_modulus(pp).get(),
        lhs: None,
        rhs: None,
        status: Status::Inapplicable,
        conjecture: case.conjecture,
        diagnostics: Diagnostics {
            note: Some(reason),
            ..Diagnostics::default()
        },
    }
}

/// The right-hand side under root sign `sign` (+1 or -1).
pub(crate) fn rhs_in(
    ctx: &mut EvalContext,
    case: &CongruenceCase,
    pp: PrimePower,
    sign: i64,
) -> Result<RhsValue, RegistryError> {
    case.applicable(pp).map_err(RegistryError::Inapplicable)?;
    let aux = match &case.aux {
        Some(spec) => Some(ctx.eval_sum(spec, case.kind, pp)?),
        None => None,
    };
    let input = RhsInput {
        pp,
        modulus: case.kind.comparison_modulus(pp),
        sign,
        aux,
    };
    case.rhs_at(&input).map_err(RegistryError::Inapplicable)
}

/// The closed-form right-hand side of `case` at `pp`, with the canonical root sign.
pub fn eval_rhs(case: &CongruenceCase, pp: PrimePower) -> Result<Residue, RegistryError> {
    rhs_in(&mut EvalContext::new(pp.p()), case, pp, 1).map(|r| r.value)
}

impl EvalContext {
    /// Verifies `case` at `pp`; `mutate` adds 1 to every right-hand side.
    pub fn verify(&mut self, case: &CongruenceCase, pp: PrimePower, mutate: bool) -> VerificationRecord {
        if let Err(reason) = case.applicable(pp) {
            return inapplicable(case, pp, reason);
        }
        let lhs = match self.eval_lhs(case, pp) {
            Ok(v) => v,
            Err(e) => return inapplicable(case, pp, e.to_string()),
        };
        let signs: &[i64] = if case.sign_sensitive { &[1, -1] } else { &[1] };
        let mut values = Vec::with_capacity(2);
        let mut diagnostics = None;
        for &sign in signs {
            match rhs_in(self, case, pp, sign) {
                Ok(r) => {
                    let v = if mutate { r.value + 1 } else { r.value };
                    values.push(v);
                    diagnostics.get_or_insert(r.diag);
                }
                Err(e) => return inapplicable(case, pp, e.to_string()),
            }
        }
        let mut diagnostics = diagnostics.unwrap_or_default();
        let rhs = values[0];
        let pass = values.iter().all(|&v| v == lhs);
        if let Some(&alt) = values.get(1) {
            diagnostics.rhs_alt = Some(alt.value());
            if (alt == lhs) != (rhs == lhs) {
                diagnostics.note = Some("outcome depends on the root sign".into());
            }
        }
        if case.kind == super::ModulusKind::ModP2 {
            let p = pp.p();
            diagnostics.agrees_mod_p = Some(lhs.value() % p == rhs.value() % p);
        }
        VerificationRecord {
            case_id: case.id.clone(),
            p: pp.p(),
            a: pp.exponent(),
            modulus: lhs.modulus().get(),
            lhs: Some(lhs.value()),
            rhs: Some(rhs.value()),
            status: if pass { Status::Pass } else { Status::Fail },
            conjecture: case.conjecture,
            diagnostics,
        }
    }
}

/// Checks `case` at `pp`; inapplicable inputs give an inapplicable record.
pub fn verify(case: &CongruenceCase, pp: PrimePower) -> VerificationRecord {
    EvalContext::new(pp.p()).verify(case, pp, false)
}

/// As [`verify`] with the right-hand side perturbed by +1.
pub fn verify_mutated(case: &CongruenceCase, pp: PrimePower) -> VerificationRecord {
    EvalContext::new(pp.p()).verify(case, pp, true)
}
