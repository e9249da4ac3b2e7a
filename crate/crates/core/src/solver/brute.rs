use super::SolveError;
use crate::qbf::{Qbf, Quant};

pub const BRUTE_LIMIT: usize = 24;

/// Truth value of `q` by expanding every quantifier, without pruning.
pub fn brute_eval(q: &Qbf) -> Result<bool, SolveError> {
    q.check_closed().map_err(SolveError::Instance)?;
    let vars: Vec<(u32, Quant)> = q.prefix.iter().flat_map(|(quant, vs)| vs.iter().map(|&v| (v, *quant))).collect();
    if vars.len() > BRUTE_LIMIT {
        return Err(SolveError::TooManyAtoms { atoms: vars.len(), limit: BRUTE_LIMIT });
    }
    let mut value = vec![false; q.num_vars as usize + 1];
    Ok(expand(q, &vars, &mut value))
}

fn expand(q: &Qbf, vars: &[(u32, Quant)], value: &mut Vec<bool>) -> bool {
    let Some((&(v, quant), rest)) = vars.split_first() else {
        return q.eval_matrix(&|x| value[x as usize]);
    };
    value[v as usize] = false;
    let lo = expand(q, rest, value);
    value[v as usize] = true;
    let hi = expand(q, rest, value);
    match quant {
        Quant::Exists => lo | hi,
        Quant::Forall => lo & hi,
    }
}
