use super::blade::bits;
use super::Multivector;
use crate::error::Result;
use crate::exactalg::{same_ctx, Poly};

#[derive(Clone)]
enum Atom {
    Func(Poly),
    Field(Multivector),
}

impl Atom {
    fn degree(&self) -> usize {
        match self {
            Atom::Func(_) => 0,
            Atom::Field(_) => 1,
        }
    }

    fn to_multivector(&self) -> Multivector {
        match self {
            Atom::Func(f) => Multivector::scalar(f),
            Atom::Field(v) => v.clone(),
        }
    }
}

/// A signed wedge word of atoms.
#[derive(Clone)]
struct Word {
    odd: bool,
    atoms: Vec<Atom>,
}

impl Word {
    fn degree(&self) -> usize {
        self.atoms.iter().map(Atom::degree).sum()
    }
}

/// Independent Schouten bracket: both arguments are split into wedge words
/// `f ^ @x_{I_1} ^ ... ^ @x_{I_i}` and the bracket is expanded with the
/// graded Leibniz rule over `^`, graded antisymmetry and, on single
/// factors, `[[V, W]] = [V, W]`, `[[V, f]] = V(f)`, `[[f, V]] = -V(f)`,
/// `[[f, g]] = 0`.
pub fn schouten_oracle(x: &Multivector, y: &Multivector) -> Result<Multivector> {
    same_ctx(x.ctx(), y.ctx())?;
    let ctx = x.ctx();
    let m = (x.degree() + y.degree()).saturating_sub(1);
    let mut acc = Multivector::zero(ctx, m);
    for wx in words(x) {
        for wy in words(y) {
            for w in bracket_words(&wx, &wy) {
                acc = &acc + &assemble(&w, ctx);
            }
        }
    }
    Ok(acc)
}

fn words(x: &Multivector) -> Vec<Word> {
    let ctx = x.ctx();
    x.terms()
        .map(|(mask, c)| {
            let mut atoms = vec![Atom::Func(c.clone())];
            for l in bits(mask) {
                atoms.push(Atom::Field(Multivector::basis(ctx, &[l], &Poly::one(ctx))));
            }
            Word { odd: false, atoms }
        })
        .collect()
}

fn assemble(w: &Word, ctx: &std::sync::Arc<crate::VarContext>) -> Multivector {
    let mut acc = Multivector::scalar(&Poly::one(ctx));
    for a in &w.atoms {
        acc = acc.wedge(&a.to_multivector()).expect("same context");
    }
    acc.signed(w.odd)
}

fn single(odd: bool, a: Atom) -> Word {
    Word {
        odd,
        atoms: vec![a],
    }
}

fn bracket_atoms(a: &Atom, b: &Atom) -> Vec<Word> {
    match (a, b) {
        (Atom::Func(_), Atom::Func(_)) => vec![],
        (Atom::Field(v), Atom::Func(f)) => {
            vec![single(false, Atom::Func(v.apply(f).expect("field")))]
        }
        (Atom::Func(f), Atom::Field(v)) => {
            vec![single(true, Atom::Func(v.apply(f).expect("field")))]
        }
        (Atom::Field(v), Atom::Field(w)) => {
            vec![single(false, Atom::Field(v.commutator(w).expect("fields")))]
        }
    }
}

fn bracket_words(x: &Word, y: &Word) -> Vec<Word> {
    let flip = x.odd ^ y.odd;
    let xs = Word {
        odd: false,
        atoms: x.atoms.clone(),
    };
    let ys = Word {
        odd: false,
        atoms: y.atoms.clone(),
    };
    let mut out = raw(&xs, &ys);
    for w in out.iter_mut() {
        w.odd ^= flip;
    }
    out
}

fn raw(x: &Word, y: &Word) -> Vec<Word> {
    let i = x.degree();
    if y.atoms.len() > 1 {
        // [[X, A ^ R]] = [[X, A]] ^ R + (-1)^{(i-1)a} A ^ [[X, R]]
        let a = &y.atoms[0];
        let rest = Word {
            odd: false,
            atoms: y.atoms[1..].to_vec(),
        };
        let aw = Word {
            odd: false,
            atoms: vec![a.clone()],
        };
        let mut out = Vec::new();
        for mut w in raw(x, &aw) {
            w.atoms.extend(rest.atoms.iter().cloned());
            out.push(w);
        }
        let sign_odd = (i + 1) * a.degree() % 2 == 1;
        for w in raw(x, &rest) {
            let mut atoms = vec![a.clone()];
            atoms.extend(w.atoms);
            out.push(Word {
                odd: w.odd ^ sign_odd,
                atoms,
            });
        }
        return out;
    }
    if x.atoms.len() > 1 {
        // [[X, B]] = -(-1)^{(i-1)(b-1)} [[B, X]]
        let b = y.degree();
        let odd = ((i + 1) * (b + 1)).is_multiple_of(2);
        return raw(y, x)
            .into_iter()
            .map(|mut w| {
                w.odd ^= odd;
                w
            })
            .collect();
    }
    bracket_atoms(&x.atoms[0], &y.atoms[0])
}
