use approx::assert_relative_eq;
use lv_resilience::model::{jacobian, saddle_spectrum, tangent_lines};
use lv_resilience::{NondimParams, State};
use nalgebra::{Matrix2, Vector2};

fn numeric(p: &NondimParams) -> (Matrix2<f64>, [f64; 2]) {
    let s = saddle_spectrum(p).unwrap();
    let j = jacobian(State::new(s.a, s.b), p);
    let m = Matrix2::new(j[0][0], j[0][1], j[1][0], j[1][1]);
    let mut ev: Vec<f64> = m.eigenvalues().unwrap().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    (m, [ev[0], ev[1]])
}

#[test]
fn eigenvalues_match_schur() {
    for (a, b, d) in [(2.0, 2.0, 1.0), (1.5, 4.0, 0.3), (4.0, 1.5, 3.0), (1.01, 1.01, 1.0), (8.0, 1.2, 50.0), (1.2, 8.0, 0.02)] {
        let p = NondimParams::new(a, b, d).unwrap();
        let s = saddle_spectrum(&p).unwrap();
        let (_, ev) = numeric(&p);
        assert_relative_eq!(s.lambda1, ev[0], max_relative = 1e-12);
        assert_relative_eq!(s.lambda2, ev[1], max_relative = 1e-12);
    }
}

#[test]
fn slopes_span_eigenvectors() {
    for (a, b, d) in [(2.0, 3.0, 2.0), (1.5, 1.5, 0.3), (4.0, 2.0, 10.0)] {
        let p = NondimParams::new(a, b, d).unwrap();
        let s = saddle_spectrum(&p).unwrap();
        let (m, _) = numeric(&p);
        for (lambda, slope) in [(s.lambda1, s.m), (s.lambda2, s.m_u)] {
            let v = Vector2::new(1.0, slope);
            let r = m * v - v * lambda;
            assert!(r.norm() < 1e-12 * (1.0 + lambda.abs()), "residual {r:?}");
        }
        let (l, lu) = tangent_lines(&s, s.a + 0.1);
        assert_relative_eq!(l, s.b + 0.1 * s.m, max_relative = 1e-14);
        assert_relative_eq!(lu, s.b + 0.1 * s.m_u, max_relative = 1e-14);
    }
}
