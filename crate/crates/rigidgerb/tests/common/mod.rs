//! Brute-force cohomology of finite modules, used as an oracle against the
//! Smith normal form pipeline.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use rigidgerb::{FiniteGroup, GammaModule};

/// A finite module flattened to index tables.
pub struct Flat {
    pub group: FiniteGroup,
    pub elems: Vec<Vec<i64>>,
    pub zero: usize,
    add: Vec<Vec<usize>>,
    neg: Vec<usize>,
    act: Vec<Vec<usize>>,
}

impl Flat {
    pub fn new(m: &GammaModule) -> Flat {
        let elems = m.elements().expect("finite module");
        let index: HashMap<Vec<i64>, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let look = |v: Vec<i64>| *index.get(&m.reduce(&v)).expect("closed under the operations");
        let add = elems
            .iter()
            .map(|a| elems.iter().map(|b| look(m.add(a, b))).collect())
            .collect();
        let neg = elems.iter().map(|a| look(m.neg(a))).collect();
        let act = m
            .group()
            .elements()
            .map(|g| elems.iter().map(|a| look(m.act(g, a))).collect())
            .collect();
        let zero = look(m.zero());
        Flat {
            group: m.group().clone(),
            elems,
            zero,
            add,
            neg,
            act,
        }
    }

    pub fn size(&self) -> usize {
        self.elems.len()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add[a][self.neg[b]]
    }

    pub fn act(&self, g: usize, a: usize) -> usize {
        self.act[g][a]
    }

    fn norm(&self, a: usize) -> usize {
        self.group.elements().fold(self.zero, |s, g| self.add(s, self.act(g, a)))
    }

    fn times(&self, k: usize, a: usize) -> usize {
        (0..k).fold(self.zero, |s, _| self.add(s, a))
    }
}

/// Order and exponent of a finite abelian group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub order: u128,
    pub exponent: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `A/B` for finite sets of tables closed under the group law.
fn quotient_shape<T: Clone + Eq + std::hash::Hash>(
    a: &[T],
    b: &HashSet<T>,
    zero: &T,
    add: impl Fn(&T, &T) -> T,
) -> Shape {
    let mut exponent = 1u64;
    for x in a {
        let mut k = 1u64;
        let mut y = x.clone();
        while !b.contains(&y) {
            y = add(&y, x);
            k += 1;
        }
        exponent = exponent / gcd(exponent, k) * k;
    }
    debug_assert!(b.contains(zero));
    Shape {
        order: (a.len() / b.len()) as u128,
        exponent,
    }
}

/// Subgroup generated by a set of elements.
fn span(m: &Flat, gens: &[usize]) -> HashSet<usize> {
    let mut seen: HashSet<usize> = [m.zero].into_iter().collect();
    let mut queue: VecDeque<usize> = [m.zero].into_iter().collect();
    while let Some(x) = queue.pop_front() {
        for &g in gens {
            let y = m.add(x, g);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// `Ĥ^{-1} = ker N / IM`.
pub fn tate_minus1(m: &Flat) -> Shape {
    let ker: Vec<usize> = (0..m.size()).filter(|&a| m.norm(a) == m.zero).collect();
    let gens: Vec<usize> = m
        .group
        .elements()
        .flat_map(|g| (0..m.size()).map(move |a| (g, a)))
        .map(|(g, a)| m.sub(m.act(g, a), a))
        .collect();
    let im = span(m, &gens);
    quotient_shape(&ker, &im, &m.zero, |&x, &y| m.add(x, y))
}

/// `Ĥ^0 = M^Γ / NM`.
pub fn tate_zero(m: &Flat) -> Shape {
    let inv: Vec<usize> = (0..m.size())
        .filter(|&a| m.group.elements().all(|g| m.act(g, a) == a))
        .collect();
    let norms: HashSet<usize> = (0..m.size()).map(|a| m.norm(a)).collect();
    quotient_shape(&inv, &norms, &m.zero, |&x, &y| m.add(x, y))
}

/// Spanning tree of the Cayley graph: `parent[x] = (p, s)` with `x = p s`.
fn cayley_tree(g: &FiniteGroup, gens: &[usize]) -> (Vec<usize>, Vec<Option<(usize, usize)>>) {
    let mut parent = vec![None; g.order()];
    let mut order = vec![g.identity()];
    let mut seen = vec![false; g.order()];
    seen[g.identity()] = true;
    let mut i = 0;
    while i < order.len() {
        let p = order[i];
        for &s in gens {
            let x = g.mul(p, s);
            if !seen[x] {
                seen[x] = true;
                parent[x] = Some((p, s));
                order.push(x);
            }
        }
        i += 1;
    }
    assert_eq!(order.len(), g.order(), "generators must generate");
    (order, parent)
}

fn gens_of(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut reached = vec![g.identity()];
    for x in g.elements() {
        if !reached.contains(&x) {
            gens.push(x);
            reached = g.generated(&gens);
        }
    }
    gens
}

/// Crossed homomorphisms `f: Γ -> M` as tables indexed by group element.
fn one_cocycles(m: &Flat) -> Vec<Vec<usize>> {
    let g = &m.group;
    let gens = gens_of(g);
    let (order, parent) = cayley_tree(g, &gens);
    let mut out = Vec::new();
    let total = m.size().pow(gens.len() as u32);
    for mut idx in 0..total {
        let mut at_gen = HashMap::new();
        for &s in &gens {
            at_gen.insert(s, idx % m.size());
            idx /= m.size();
        }
        let mut f = vec![m.zero; g.order()];
        for &x in &order[1..] {
            let (p, s) = parent[x].expect("tree");
            f[x] = m.add(f[p], m.act(p, at_gen[&s]));
        }
        let ok = g
            .elements()
            .all(|a| g.elements().all(|b| f[g.mul(a, b)] == m.add(f[a], m.act(a, f[b]))));
        if ok {
            out.push(f);
        }
    }
    out
}

pub fn h1(m: &Flat) -> Shape {
    let g = &m.group;
    let z = one_cocycles(m);
    let b: HashSet<Vec<usize>> = (0..m.size())
        .map(|a| g.elements().map(|x| m.sub(m.act(x, a), a)).collect())
        .collect();
    let zero = vec![m.zero; g.order()];
    quotient_shape(&z, &b, &zero, |x, y| x.iter().zip(y).map(|(&a, &b)| m.add(a, b)).collect())
}

/// 2-cocycles normalized on the identity and vanishing on the edges of a
/// Cayley spanning tree, enumerated by backtracking over their values on
/// `Γ × gens`.
fn tree_two_cocycles(m: &Flat, gens: &[usize], order: &[usize], parent: &[Option<(usize, usize)>]) -> Vec<Vec<usize>> {
    let g = &m.group;
    let k = g.order();
    let e = g.identity();
    // Unknowns x(a, s) = f(a, s) for generators s.
    let mut fixed: HashMap<(usize, usize), usize> = HashMap::new();
    for &s in gens {
        fixed.insert((e, s), m.zero);
    }
    for &x in &order[1..] {
        let (p, s) = parent[x].expect("tree");
        fixed.insert((p, s), m.zero);
    }
    let free: Vec<(usize, usize)> = g
        .elements()
        .flat_map(|a| gens.iter().map(move |&s| (a, s)))
        .filter(|key| !fixed.contains_key(key))
        .collect();

    // f(a, h) from x, following the tree path to h; None where an unknown
    // is still unassigned.
    let partial = |x: &HashMap<(usize, usize), usize>| -> Vec<Option<usize>> {
        let mut f = vec![None; k * k];
        for a in g.elements() {
            f[a * k + e] = Some(m.zero);
        }
        for &h in &order[1..] {
            let (p, s) = parent[h].expect("tree");
            for a in g.elements() {
                // f(a, p s) = f(a p, s) + f(a, p) - a f(p, s)
                f[a * k + h] = match (x.get(&(g.mul(a, p), s)), f[a * k + p], x.get(&(p, s))) {
                    (Some(&u), Some(w), Some(&t)) => Some(m.sub(m.add(u, w), m.act(a, t))),
                    _ => None,
                };
            }
        }
        f
    };
    let full = |x: &HashMap<(usize, usize), usize>| -> Option<Vec<usize>> { partial(x).into_iter().collect() };
    // Consistency of the determined values on every edge h -> h s.
    let consistent = |x: &HashMap<(usize, usize), usize>| -> bool {
        let f = partial(x);
        for a in g.elements() {
            for h in g.elements() {
                for &s in gens {
                    let hs = g.mul(h, s);
                    if let (Some(lhs), Some(u), Some(w), Some(&t)) =
                        (f[a * k + hs], x.get(&(g.mul(a, h), s)), f[a * k + h], x.get(&(h, s)))
                    {
                        if lhs != m.sub(m.add(*u, w), m.act(a, t)) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    };

    let mut out = Vec::new();
    let mut x = fixed.clone();
    fn search(
        depth: usize,
        free: &[(usize, usize)],
        size: usize,
        x: &mut HashMap<(usize, usize), usize>,
        consistent: &dyn Fn(&HashMap<(usize, usize), usize>) -> bool,
        emit: &mut dyn FnMut(&HashMap<(usize, usize), usize>),
    ) {
        if depth == free.len() {
            emit(x);
            return;
        }
        for v in 0..size {
            x.insert(free[depth], v);
            if consistent(x) {
                search(depth + 1, free, size, x, consistent, emit);
            }
        }
        x.remove(&free[depth]);
    }
    let mut emit = |x: &HashMap<(usize, usize), usize>| {
        let f = full(x).expect("all values determined");
        let ok = g.elements().all(|a| {
            g.elements().all(|b| {
                g.elements().all(|c| {
                    let lhs = m.add(m.act(a, f[b * k + c]), f[a * k + g.mul(b, c)]);
                    let rhs = m.add(f[g.mul(a, b) * k + c], f[a * k + b]);
                    lhs == rhs
                })
            })
        });
        if ok {
            out.push(f);
        }
    };
    search(0, &free, m.size(), &mut x, &consistent, &mut emit);
    out
}

pub fn h2(m: &Flat) -> Shape {
    let g = &m.group;
    let k = g.order();
    if k == 1 {
        return Shape { order: 1, exponent: 1 };
    }
    let gens = gens_of(g);
    let (order, parent) = cayley_tree(g, &gens);
    let z = tree_two_cocycles(m, &gens, &order, &parent);
    // Coboundaries dc with c(e) = 0 vanishing on tree edges: c is free on
    // the generators and determined elsewhere.
    let mut b = HashSet::new();
    let total = m.size().pow(gens.len() as u32);
    for mut idx in 0..total {
        let mut c = vec![m.zero; k];
        for &s in &gens {
            c[s] = idx % m.size();
            idx /= m.size();
        }
        for &x in &order[1..] {
            let (p, s) = parent[x].expect("tree");
            if p != g.identity() {
                c[x] = m.add(c[p], m.act(p, c[s]));
            }
        }
        let dc: Vec<usize> = (0..k * k)
            .map(|i| {
                let (a, h) = (i / k, i % k);
                m.add(m.sub(m.act(a, c[h]), c[g.mul(a, h)]), c[a])
            })
            .collect();
        b.insert(dc);
    }
    let zero = vec![m.zero; k * k];
    quotient_shape(&z, &b, &zero, |x, y| x.iter().zip(y).map(|(&a, &b)| m.add(a, b)).collect())
}

pub fn brute(m: &GammaModule, degree: i32) -> Shape {
    let f = Flat::new(m);
    match degree {
        -1 => tate_minus1(&f),
        0 => tate_zero(&f),
        1 => h1(&f),
        2 => h2(&f),
        d => panic!("no oracle in degree {}", d),
    }
}

pub fn shape_of(a: &rigidgerb::FinAb) -> Shape {
    Shape {
        order: a.order().expect("finite"),
        exponent: a.exponent().expect("finite") as u64,
    }
}

/// Whether a crossed homomorphism, given by its value table, is principal.
pub fn is_principal(m: &Flat, f: &[usize]) -> bool {
    (0..m.size()).any(|a| m.group.elements().all(|x| f[x] == m.sub(m.act(x, a), a)))
}

/// Crossed homomorphisms as element tables.
pub fn crossed_homs(m: &Flat) -> Vec<Vec<usize>> {
    one_cocycles(m)
}
