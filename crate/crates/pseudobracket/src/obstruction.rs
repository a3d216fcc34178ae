//! The cosmetic-crossing obstruction.
//!
//! Turn a selected classical crossing of a knot diagram into a pseudo
//! crossing and look at the bracket of the result. If the crossing were
//! cosmetic (switching it yields an equivalent diagram), that bracket would
//! have no `V` terms at all, and it would divide the brackets of both the
//! original diagram and its switch, with unit quotients `-A^(+-3)`. A
//! nonzero `V`-part therefore certifies the crossing is not cosmetic; a
//! zero `V`-part decides nothing.

use serde_json::json;
use thiserror::Error;

use crate::bracket::{bracket, Engine};
use crate::diagram::{DiagramError, PseudoDiagram};
use crate::polynomial::{LaurentPoly, PseudoPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("diagram has pseudo crossings")]
    HasPseudoCrossings,
    #[error("crossing {0} is not classical")]
    NotClassical(usize),
    #[error("diagram has {0} components, obstruction needs a knot")]
    MultiComponent(usize),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Outcome of testing one crossing. `NotCosmetic` is a proof; the test is a
/// necessary condition only, so there is no verdict that certifies a
/// cosmetic crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NotCosmetic,
    Inconclusive,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::NotCosmetic => "NOT-COSMETIC",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// Everything computed while testing one crossing.
///
/// The `+`/`-` roles are oriented by the crossing's actual sign: the input
/// diagram plays the positive role when the selected crossing is positive.
/// When `v_part` is zero both unit relations hold automatically; they are
/// recomputed here as a cross-check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionReport {
    pub crossing: usize,
    pub sign: i8,
    pub bracket_square: PseudoPoly,
    pub bracket_plus: PseudoPoly,
    pub bracket_minus: PseudoPoly,
    pub v_part: PseudoPoly,
    pub relation_plus_ok: bool,
    pub relation_minus_ok: bool,
    pub verdict: Verdict,
}

impl ObstructionReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "crossing": self.crossing,
            "sign": self.sign,
            "verdict": self.verdict.label(),
            "bracket_square": self.bracket_square.to_json(),
            "bracket_plus": self.bracket_plus.to_json(),
            "bracket_minus": self.bracket_minus.to_json(),
            "v_part": self.v_part.to_json(),
            "relation_plus_ok": self.relation_plus_ok,
            "relation_minus_ok": self.relation_minus_ok,
        })
    }
}

fn check_unit_relation(numerator: &PseudoPoly, square: &PseudoPoly, unit_exp: i64) -> bool {
    if !square.v_part().is_zero() || !numerator.v_part().is_zero() {
        return false;
    }
    match numerator.v_coeff(0).exact_div(&square.v_coeff(0)) {
        Ok(q) => q == LaurentPoly::monomial(unit_exp, -1),
        Err(_) => false,
    }
}

/// Test crossing `i` of a classical knot diagram.
pub fn obstruct(
    d: &PseudoDiagram,
    i: usize,
    engine: Engine,
) -> Result<ObstructionReport, ObstructionError> {
    if !d.is_classical() {
        return Err(ObstructionError::HasPseudoCrossings);
    }
    if d.n_components() != 1 {
        return Err(ObstructionError::MultiComponent(d.n_components()));
    }
    if i >= d.crossing_count() {
        return Err(ObstructionError::Diagram(DiagramError::BadIndex(i)));
    }
    let sign = d.crossing_sign(i).map_err(|e| match e {
        DiagramError::NotClassical(i) => ObstructionError::NotClassical(i),
        other => ObstructionError::Diagram(other),
    })?;

    let square = d.make_pseudo(i)?;
    let switched = d.switch_crossing(i)?;
    let (d_plus, d_minus) = if sign > 0 {
        (d.clone(), switched)
    } else {
        (switched, d.clone())
    };

    let bracket_square = bracket(&square, engine).expect("contract engine has no size limit");
    let bracket_plus = bracket(&d_plus, engine).expect("contract engine has no size limit");
    let bracket_minus = bracket(&d_minus, engine).expect("contract engine has no size limit");
    let v_part = bracket_square.v_part();
    let verdict = if v_part.is_zero() {
        Verdict::Inconclusive
    } else {
        Verdict::NotCosmetic
    };

    Ok(ObstructionReport {
        crossing: i,
        sign,
        relation_plus_ok: check_unit_relation(&bracket_plus, &bracket_square, 3),
        relation_minus_ok: check_unit_relation(&bracket_minus, &bracket_square, -3),
        bracket_square,
        bracket_plus,
        bracket_minus,
        v_part,
        verdict,
    })
}

/// Run [`obstruct`] on every crossing, in index order.
pub fn scan(d: &PseudoDiagram, engine: Engine) -> Result<Vec<ObstructionReport>, ObstructionError> {
    (0..d.crossing_count()).map(|i| obstruct(d, i, engine)).collect()
}

/// Render reports as an aligned text table.
pub fn render_table(reports: &[ObstructionReport]) -> String {
    let mut rows: Vec<[String; 4]> = vec![[
        "crossing".into(),
        "sign".into(),
        "verdict".into(),
        "v-part".into(),
    ]];
    for r in reports {
        rows.push([
            r.crossing.to_string(),
            format!("{:+}", r.sign),
            r.verdict.label().into(),
            r.v_part.to_string(),
        ]);
    }
    let widths: Vec<usize> = (0..4)
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    rows.iter()
        .map(|r| {
            let mut line = String::new();
            for (c, cell) in r.iter().enumerate() {
                if c > 0 {
                    line.push_str("  ");
                }
                line.push_str(cell);
                if c < 3 {
                    for _ in cell.len()..widths[c] {
                        line.push(' ');
                    }
                }
            }
            line
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd_text;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for &(e, c) in terms {
            p = p + LaurentPoly::monomial(e, c);
        }
        p
    }

    fn positive_trefoil() -> PseudoDiagram {
        parse_pd_text("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)").unwrap()
    }

    fn double_kink() -> PseudoDiagram {
        parse_pd_text("X(1,3,2,2) X(3,1,4,4)").unwrap()
    }

    #[test]
    fn trefoil_crossings_not_cosmetic() {
        let d = positive_trefoil();
        for engine in [Engine::Naive, Engine::Contract] {
            let reports = scan(&d, engine).unwrap();
            assert_eq!(reports.len(), 3);
            for r in &reports {
                assert_eq!(r.verdict, Verdict::NotCosmetic);
                assert_eq!(
                    r.v_part,
                    PseudoPoly::v().scale(&lp(&[(-8, 1), (4, -1)]))
                );
                assert!(!r.relation_plus_ok && !r.relation_minus_ok);
            }
        }
    }

    #[test]
    fn double_kink_inconclusive_with_relations() {
        let d = double_kink();
        let reports = scan(&d, Engine::Contract).unwrap();
        assert_eq!(reports.len(), 2);
        for r in &reports {
            assert_eq!(r.verdict, Verdict::Inconclusive);
            assert!(r.v_part.is_zero());
            assert_eq!(
                r.bracket_square,
                PseudoPoly::from_laurent(LaurentPoly::monomial(3, -1))
            );
            assert!(r.relation_plus_ok, "plus relation at {}", r.crossing);
            assert!(r.relation_minus_ok, "minus relation at {}", r.crossing);
        }
    }

    #[test]
    fn single_kink_inconclusive() {
        let d = parse_pd_text("X(1,1,2,2)").unwrap();
        let r = obstruct(&d, 0, Engine::Naive).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.bracket_square, PseudoPoly::one());
        assert!(r.relation_plus_ok && r.relation_minus_ok);
    }

    #[test]
    fn errors() {
        let d = positive_trefoil();
        let pseudo = d.make_pseudo(0).unwrap();
        assert_eq!(
            obstruct(&pseudo, 1, Engine::Naive),
            Err(ObstructionError::HasPseudoCrossings)
        );
        let hopf_json = r#"{
            "crossings": [
                {"kind": "X", "arcs": [2, 4, 3, 1]},
                {"kind": "X", "arcs": [4, 2, 1, 3]}
            ],
            "successor": {"1": 4, "4": 1, "2": 3, "3": 2}
        }"#;
        let hopf = crate::diagram::parse_pd_json(hopf_json).unwrap();
        assert_eq!(
            obstruct(&hopf, 0, Engine::Naive),
            Err(ObstructionError::MultiComponent(2))
        );
        assert!(obstruct(&d, 9, Engine::Naive).is_err());
    }

    #[test]
    fn verdict_invariant_under_relabeling() {
        let d = positive_trefoil();
        let map: std::collections::BTreeMap<u32, u32> =
            d.arcs().map(|a| (a, a + 40)).collect();
        let relabeled = d.relabel(&map).unwrap();
        let r1 = scan(&d, Engine::Contract).unwrap();
        let r2 = scan(&relabeled, Engine::Contract).unwrap();
        for (a, b) in r1.iter().zip(&r2) {
            assert_eq!(a.verdict, b.verdict);
            assert_eq!(a.v_part, b.v_part);
        }
    }

    #[test]
    fn table_rendering() {
        let d = positive_trefoil();
        let table = render_table(&scan(&d, Engine::Contract).unwrap());
        assert!(table.contains("NOT-COSMETIC"));
        assert!(table.lines().count() == 4);
    }
}
