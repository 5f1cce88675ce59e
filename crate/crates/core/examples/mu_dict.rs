use ccr::contact::ContactAlgebra;
use ccr::cralg::GradedComplexSubspace;

fn main() {
    let alg = ContactAlgebra::new(1, 0);
    let m = alg.parse("z^2+z*zb").unwrap();
    let n = alg.parse("z^3+2*z^2*zb+z*zb^2+mu^1[-3*i*z-3*i*zb]").unwrap();
    let gens = vec![
        alg.center(), alg.z(1), alg.zb(1),
        alg.grading_element(),
        m.clone(), m.conjugate(),
        n.clone(), n.conjugate(),
    ];
    let g = GradedComplexSubspace::from_elements(&alg, 2, &gens).unwrap();
    println!("dims: {:?}", g.dims());
    println!("violation: {:?}", g.closure_violation().unwrap());
    for d1 in -2..=2i64 {
        for d2 in d1..=2i64 {
            if d1 + d2 < -2 || d1 + d2 > 2 { continue; }
            for x in g.elements(d1) {
                for y in g.elements(d2) {
                    let b = alg.bracket(&x, &y);
                    if b.is_zero() { continue; }
                    let target = g.piece(d1 + d2);
                    let inside = target.contains_vector(&alg.coordinates(&b)).unwrap();
                    if !inside {
                        println!("[deg {} elt {}, deg {} elt {}] = {} NOT in piece {}", d1, x, d2, y, b, d1 + d2);
                    }
                }
            }
        }
    }
    println!("done");
}
