use klein_core::oval::{
    build_incidence, conic_oval, involution_model, is_regular, secants_pascalian, verify_abstract_oval,
    AbstractOval, PrimeField,
};

const PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

/// Brute-force count of projective points off `xz = y²`, straight from the coordinates.
fn off_conic_points(p: u64) -> usize {
    let mut n = 0;
    for x in 0..p {
        for y in 0..p {
            for z in 0..p {
                if (x, y, z) != (0, 0, 0) && !(x * z + p * p - y * y).is_multiple_of(p) {
                    n += 1;
                }
            }
        }
    }
    n / (p as usize - 1)
}

#[test]
fn field_arithmetic() {
    let f = PrimeField::new(7).unwrap();
    assert_eq!(f.inv(3), Some(5));
    assert_eq!(f.inv(0), None);
    assert_eq!(f.sub(2, 5), 4);
    assert!(PrimeField::new(9).is_err());
    assert!(PrimeField::new(2).is_err());
    assert!(conic_oval(15).is_err());
}

#[test]
fn conic_counts() {
    for p in PRIMES {
        let c = conic_oval(p).unwrap();
        assert_eq!(c.oval.size as u64, p + 1);
        assert_eq!(c.oval.involutions.len() as u64, p * p);
        assert_eq!(c.oval.involutions.len(), off_conic_points(p));
        let counts = c.fixed_point_counts();
        let free = counts.iter().filter(|&&k| k == 0).count() as u64;
        let two = counts.iter().filter(|&&k| k == 2).count() as u64;
        assert_eq!(free, p * (p - 1) / 2);
        assert_eq!(two, p * (p + 1) / 2);
        assert_eq!(free + two, p * p);
    }
    let c = conic_oval(3).unwrap();
    let counts = c.fixed_point_counts();
    assert_eq!(counts.iter().filter(|&&k| k == 0).count(), 3);
    assert_eq!(counts.iter().filter(|&&k| k == 2).count(), 6);
}

#[test]
fn conic_ovals_are_pascalian_and_regular() {
    for p in PRIMES {
        let b = conic_oval(p).unwrap().oval;
        assert!(verify_abstract_oval(&b), "p = {p}");
        assert!(secants_pascalian(&b).unwrap(), "p = {p}");
        assert!(is_regular(&b).unwrap(), "p = {p}");
    }
}

#[test]
fn mutations_are_caught() {
    let mut b = conic_oval(5).unwrap().oval;
    // swap two values inside one involution: it stops being involutory
    let s = &mut b.involutions[0];
    let (i, j) = (0, s[0]);
    let k = (0..s.len()).find(|&k| k != i && k != j).unwrap();
    s.swap(i, k);
    assert!(!verify_abstract_oval(&b));
    assert!(secants_pascalian(&b).is_err());
    assert!(is_regular(&b).is_err());

    // dropping a member breaks exactly-one
    let mut b = conic_oval(5).unwrap().oval;
    b.involutions.pop();
    assert!(!verify_abstract_oval(&b));

    // a duplicated member breaks it too
    let mut b = conic_oval(3).unwrap().oval;
    let first = b.involutions[0].clone();
    b.involutions.push(first);
    assert!(!verify_abstract_oval(&b));
}

#[test]
fn tiny_domain() {
    // on three elements the transpositions cover (A, A, B, C) and (A, B, C, C);
    // fixing two elements forces the identity, which the definition admits
    let transpositions = vec![vec![1, 0, 2], vec![2, 1, 0], vec![0, 2, 1]];
    let without = AbstractOval { size: 3, involutions: transpositions.clone() };
    assert!(!verify_abstract_oval(&without));
    let mut with = transpositions;
    with.push(vec![0, 1, 2]);
    let with = AbstractOval { size: 3, involutions: with };
    assert!(verify_abstract_oval(&with));
    assert!(!verify_abstract_oval(&AbstractOval { size: 2, involutions: vec![] }));
}

#[test]
fn incidence_counts() {
    let i3 = build_incidence(&conic_oval(3).unwrap().oval).unwrap();
    assert_eq!(i3.points, 13);
    assert_eq!((i3.secant_count(), i3.tangent_count()), (6, 4));
    let i5 = build_incidence(&conic_oval(5).unwrap().oval).unwrap();
    assert_eq!(i5.points, 31);
    assert_eq!((i5.secant_count(), i5.tangent_count()), (15, 6));
    for l in &i5.lines {
        // p − 1 off-conic points on a secant, p on a tangent
        let expect = if l.is_tangent() { 5 } else { 4 };
        assert_eq!(l.involutions.len(), expect);
    }
}

#[test]
fn involution_models() {
    for (p, t0, t2) in [(3, 3, 6), (5, 10, 15)] {
        let r = involution_model(p).unwrap();
        assert_eq!((r.fixed_point_free, r.two_fixed_points), (t0, t2));
        assert_eq!((r.internal_points, r.secant_lines), (t0, t2));
        assert!(r.isomorphic);
        // each internal point lies on (p + 1)/2 secants
        assert_eq!(r.incidences, t0 * (p as usize + 1) / 2);
    }
}
