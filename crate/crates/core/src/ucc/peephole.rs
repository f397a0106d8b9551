use super::circuit::{Circuit, Gate};

/// Whether `a` can be moved past `b` (they commute as operators).
fn commutes(a: &Gate, b: &Gate) -> bool {
    let (a0, a1) = a.qubits();
    let (b0, b1) = b.qubits();
    let shared = |q: usize| q == b0 || Some(q) == b1;
    if !shared(a0) && !a1.is_some_and(shared) {
        return true;
    }
    match (a, b) {
        (Gate::Cnot { control: c1, target: t1 }, Gate::Cnot { control: c2, target: t2 }) => c1 != t2 && t1 != c2,
        (Gate::Cnot { .. }, _) => commutes(b, a),
        (_, Gate::Cnot { control, target }) => {
            (a.is_z_type() && a0 == *control) || (matches!(a, Gate::Rx(..)) && a0 == *target)
        }
        _ => (a.is_z_type() && b.is_z_type()) || (matches!(a, Gate::Rx(..)) && matches!(b, Gate::Rx(..))),
    }
}

enum Merge {
    /// Both gates vanish.
    Cancel,
    Replace(Gate),
}

fn merge(a: &Gate, b: &Gate) -> Option<Merge> {
    match (a, b) {
        (Gate::H(p), Gate::H(q)) if p == q => Some(Merge::Cancel),
        (Gate::S(p), Gate::Sdg(q)) | (Gate::Sdg(p), Gate::S(q)) if p == q => Some(Merge::Cancel),
        (Gate::Rz(p, x), Gate::Rz(q, y)) if p == q => Some(rotation(Gate::Rz(*p, x.add(y)))),
        (Gate::Rx(p, x), Gate::Rx(q, y)) if p == q => Some(rotation(Gate::Rx(*p, x.add(y)))),
        (Gate::Cnot { .. }, Gate::Cnot { .. }) if a == b => Some(Merge::Cancel),
        _ => None,
    }
}

fn rotation(g: Gate) -> Merge {
    match &g {
        Gate::Rz(_, a) | Gate::Rx(_, a) if a.is_zero() => Merge::Cancel,
        _ => Merge::Replace(g),
    }
}

fn is_trivial(g: &Gate) -> bool {
    matches!(g, Gate::Rz(_, a) | Gate::Rx(_, a) if a.is_zero())
}

/// One forward sweep; returns whether anything changed.
fn sweep(gates: &mut [Option<Gate>]) -> bool {
    let mut changed = false;
    for i in 0..gates.len() {
        let Some(a) = gates[i].clone() else { continue };
        if is_trivial(&a) {
            gates[i] = None;
            changed = true;
            continue;
        }
        for j in i + 1..gates.len() {
            let Some(b) = &gates[j] else { continue };
            if let Some(m) = merge(&a, b) {
                // `a` commutes with everything in between, so it slides up to `b`
                gates[i] = None;
                gates[j] = match m {
                    Merge::Cancel => None,
                    Merge::Replace(g) => Some(g),
                };
                changed = true;
                break;
            }
            if !commutes(&a, b) {
                break;
            }
        }
    }
    changed
}

/// Commutation-aware cancellation and rotation merging, to a fixed point.
pub fn peephole_optimize(c: &Circuit) -> Circuit {
    let mut gates: Vec<Option<Gate>> = c.gates().iter().cloned().map(Some).collect();
    while sweep(&mut gates) {
        gates.retain(Option::is_some);
    }
    Circuit::from_gates(c.width(), gates.into_iter().flatten().collect(), c.parameters().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ucc::{count_gates, Angle};

    fn circuit(width: usize, gates: Vec<Gate>) -> Circuit {
        let mut c = Circuit::new(width);
        for g in gates {
            c.push(g).unwrap();
        }
        c
    }

    #[test]
    fn cnot_pair_cancels() {
        let c = circuit(2, vec![Gate::cnot(0, 1), Gate::cnot(0, 1)]);
        assert!(peephole_optimize(&c).is_empty());
    }

    #[test]
    fn cancels_through_commuting_gates() {
        let c = circuit(
            3,
            vec![
                Gate::cnot(0, 1),
                Gate::Rz(0, Angle::constant(0.3)),
                Gate::Rx(1, Angle::constant(0.2)),
                Gate::cnot(0, 2),
                Gate::cnot(0, 1),
            ],
        );
        let o = peephole_optimize(&c);
        assert_eq!(count_gates(&o).cnot, 1);
        assert_eq!(o.len(), 3);
    }

    #[test]
    fn blocked_by_non_commuting() {
        let c = circuit(2, vec![Gate::cnot(0, 1), Gate::H(1), Gate::cnot(0, 1)]);
        assert_eq!(peephole_optimize(&c), c);
        let c = circuit(2, vec![Gate::cnot(0, 1), Gate::cnot(1, 0), Gate::cnot(0, 1)]);
        assert_eq!(peephole_optimize(&c), c);
    }

    #[test]
    fn rotations_merge_and_vanish() {
        let c = circuit(
            1,
            vec![
                Gate::Rz(0, Angle::param(0, 1.0)),
                Gate::S(0),
                Gate::Rz(0, Angle::param(0, -1.0)),
                Gate::Sdg(0),
                Gate::H(0),
                Gate::Rx(0, Angle::constant(0.5)),
                Gate::Rx(0, Angle::constant(-0.5)),
                Gate::H(0),
            ],
        );
        assert!(peephole_optimize(&c).is_empty());
    }

    #[test]
    fn symbolic_rotations_persist() {
        let c = circuit(1, vec![Gate::Rz(0, Angle::param(0, 1.0)), Gate::Rz(0, Angle::param(1, 1.0))]);
        let o = peephole_optimize(&c);
        assert_eq!(o.len(), 1);
        assert_eq!(o.gates()[0], Gate::Rz(0, Angle::param(0, 1.0).add(&Angle::param(1, 1.0))));
    }
}
