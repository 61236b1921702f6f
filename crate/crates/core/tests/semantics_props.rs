mod common;

use common::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sata::semantics::{is_monotone, rel_par, rel_seq, represents};
use sata::{interpret, Interpreter, MonFunc, MonRel};

#[test]
fn interpretation_matches_pair_set_oracle() {
    let mut rng = rng(10);
    let interp = Interpreter::default();
    for _ in 0..600 {
        let dom = rng.gen_range(0..=3);
        let d = random_diagram(&mut rng, dom, 12);
        let r = interp.interpret(&d).unwrap();
        assert_eq!(pairs_of(&r), oracle(&d), "{}", sata::diagram::emit_sd(&d));
        assert_eq!(interp.interpret_by_fold(&d).unwrap(), r);
    }
}

#[test]
fn functoriality() {
    let mut rng = rng(11);
    for _ in 0..300 {
        let dom = rng.gen_range(0..=3);
        let c = random_diagram(&mut rng, dom, 6);
        let d = random_diagram(&mut rng, c.cod(), 6);
        let (rc, rd) = (interpret(&c).unwrap(), interpret(&d).unwrap());
        assert_eq!(interpret(&seq(&c, &d)).unwrap(), rel_seq(&rc, &rd).unwrap());
        let w = rng.gen_range(0..=2);
        let e = random_diagram(&mut rng, w, 4);
        let re = interpret(&e).unwrap();
        assert_eq!(interpret(&par(&c, &e)).unwrap(), rel_par(&rc, &re));
    }
}

#[test]
fn composites_stay_monotone() {
    let mut rng = rng(12);
    for _ in 0..300 {
        let dom = rng.gen_range(0..=3);
        let r = interpret(&random_diagram(&mut rng, dom, 6)).unwrap();
        let s = interpret(&random_diagram(&mut rng, r.n(), 6)).unwrap();
        let q = rel_seq(&r, &s).unwrap();
        assert!(is_monotone(q.m(), q.n(), q.table()).unwrap());
        let p = rel_par(&r, &s);
        assert!(is_monotone(p.m(), p.n(), p.table()).unwrap());
    }
}

fn all_monotone(m: usize, n: usize) -> Vec<MonFunc> {
    let size = 1usize << m;
    let mut out = Vec::new();
    let mut values = vec![0u64; size];
    loop {
        if let Ok(f) = MonFunc::new(m, n, values.clone()) {
            out.push(f);
        }
        let mut i = 0;
        loop {
            if i == size {
                return out;
            }
            values[i] += 1;
            if values[i] < 1 << n {
                break;
            }
            values[i] = 0;
            i += 1;
        }
    }
}

fn random_monotone(rng: &mut ChaCha8Rng, m: usize, n: usize) -> MonFunc {
    let all = all_monotone(m, n);
    all[rng.gen_range(0..all.len())].clone()
}

#[test]
fn representation_is_compositional() {
    let mut rng = rng(13);
    for _ in 0..200 {
        let (a, b, c) = (rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..=2));
        let f = random_monotone(&mut rng, a, b);
        let g = random_monotone(&mut rng, b, c);
        let (rf, rg) = (MonRel::of_function(&f), MonRel::of_function(&g));
        assert!(represents(&rf, &f).unwrap());
        let gf = MonFunc::from_fn(a, c, |x| g.apply(f.apply(x))).unwrap();
        assert!(represents(&rel_seq(&rf, &rg).unwrap(), &gf).unwrap());
        let h = random_monotone(&mut rng, c, a);
        let fh = MonFunc::from_fn(a + c, b + a, |x| {
            f.apply(x & ((1 << a) - 1)) | h.apply(x >> a) << b
        })
        .unwrap();
        assert!(represents(&rel_par(&rf, &MonRel::of_function(&h)), &fh).unwrap());
    }
}

#[test]
fn representation_is_faithful() {
    for m in 0..=2 {
        for n in 0..=2 {
            let all = all_monotone(m, n);
            for (i, f) in all.iter().enumerate() {
                let rf = MonRel::of_function(f);
                for (j, g) in all.iter().enumerate() {
                    assert_eq!(represents(&rf, g).unwrap(), i == j, "{m} {n}");
                }
            }
        }
    }
    assert_eq!(all_monotone(2, 1).len(), 6);
    assert_eq!(all_monotone(1, 2).len(), 9);
}

#[test]
fn width_cap_is_enforced_everywhere() {
    let mut rng = rng(14);
    let tight = Interpreter::new(4);
    for _ in 0..200 {
        let d = random_diagram(&mut rng, 3, 8);
        match tight.interpret(&d) {
            Ok(r) => assert_eq!(r, interpret(&d).unwrap()),
            Err(e) => assert!(matches!(e, sata::SemanticsError::WidthCapExceeded { limit: 4, .. }), "{e}"),
        }
        if d.dom() + d.cod() > 4 {
            assert!(tight.interpret(&d).is_err());
        }
    }
}
