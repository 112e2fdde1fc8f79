//! The fast S/T-word recursion for modified c- and g-vector triples, the
//! eigen-style change of basis, and the closed forms along trunks and at the
//! roots of maximal branches. Everything here is matrix-free: the only inputs
//! are the sign pattern and the walk combinatorics.

use serde::{Deserialize, Serialize};

use crate::exchange::SignPattern;
use crate::linalg::ModVec;
use crate::walk::{initial_kst, Kind,Kst, Letter, Walk};
use crate::Result;

/// The role of a vector at a walk: K is the direction just mutated, S and T
/// the two admissible continuations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    K,
    S,
    T,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::K, Role::S, Role::T];

    fn slot(self) -> usize {
        match self {
            Role::K => 0,
            Role::S => 1,
            Role::T => 2,
        }
    }

    /// The raw index this role points at for a given (K,S,T) triple.
    pub fn raw_index(self, kst: Kst) -> u8 {
        match self {
            Role::K => kst.k,
            Role::S => kst.s,
            Role::T => kst.t,
        }
    }
}

/// The fixed vector c = e1 + e2 + e3 (modified coordinates).
pub fn frak_c() -> ModVec {
    ModVec::new(1, 1, 1)
}

/// The fixed vector g_i = e_{s0} + e_{t0} - e_{k0} of the subtree in
/// direction i.
pub fn frak_g(sign_pattern: SignPattern, i: u8) -> Result<ModVec> {
    let kst = initial_kst(sign_pattern, i)?;
    Ok(&(&ModVec::unit(kst.s as usize) + &ModVec::unit(kst.t as usize))
        - &ModVec::unit(kst.k as usize))
}

/// Modified c- and g-vector triples at a nonempty walk, stored by role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternState {
    pub walk: Walk,
    c: [ModVec; 3],
    g: [ModVec; 3],
}

impl PatternState {
    pub fn c(&self, role: Role) -> &ModVec {
        &self.c[role.slot()]
    }

    pub fn g(&self, role: Role) -> &ModVec {
        &self.g[role.slot()]
    }

    /// The c-triple reordered by raw index (1,2,3).
    pub fn c_by_raw_index(&self) -> [ModVec; 3] {
        self.by_raw_index(&self.c)
    }

    /// The g-triple reordered by raw index (1,2,3).
    pub fn g_by_raw_index(&self) -> [ModVec; 3] {
        self.by_raw_index(&self.g)
    }

    fn by_raw_index(&self, triple: &[ModVec; 3]) -> [ModVec; 3] {
        let kst = self.walk.kst().expect("pattern states have nonempty walks");
        let mut out = [ModVec::zero(), ModVec::zero(), ModVec::zero()];
        for role in Role::ALL {
            out[(role.raw_index(kst) - 1) as usize] = triple[role.slot()].clone();
        }
        out
    }
}

/// The state at the walk [i].
pub fn seed(sign_pattern: SignPattern, i: u8) -> Result<PatternState> {
    let walk = Walk::seed(sign_pattern, i)?;
    let kst = walk.kst().expect("seed is nonempty");
    let (ek, es, et) = (
        ModVec::unit(kst.k as usize),
        ModVec::unit(kst.s as usize),
        ModVec::unit(kst.t as usize),
    );
    Ok(PatternState {
        walk,
        c: [-&ek, &es + &(&ek * 2), et.clone()],
        g: [&(&es * 2) - &ek, es, et],
    })
}

/// One S- or T-mutation at the role level. The trunk/branch T-rule is chosen
/// by the kind of the current walk.
pub fn step(state: &PatternState, letter: Letter) -> PatternState {
    let kind = state.walk.kind().expect("nonempty");
    let [ck, cs, ct] = &state.c;
    let [gk, gs, gt] = &state.g;
    let (c, g) = match (letter, kind) {
        (Letter::S, _) => (
            [-cs, ck + &(cs * 2), ct.clone()],
            [&(gk * 2) - gs, gk.clone(), gt.clone()],
        ),
        (Letter::T, Kind::Trunk) => (
            [-ct, cs + &(ct * 2), ck.clone()],
            [&(gs * 2) - gt, gs.clone(), gk.clone()],
        ),
        (Letter::T, Kind::Branch) => (
            [-ct, ck + &(ct * 2), cs.clone()],
            [&(gk * 2) - gt, gk.clone(), gs.clone()],
        ),
    };
    PatternState {
        walk: state.walk.extend_letter(letter),
        c,
        g,
    }
}

/// Replays the recursion along a nonempty walk.
pub fn eval(walk: &Walk) -> Result<PatternState> {
    let i = walk
        .first()
        .ok_or_else(|| crate::Error::Parse("cannot evaluate the empty walk".into()))?;
    let mut state = seed(walk.sign_pattern(), i)?;
    for &letter in walk.word().unwrap_or(&[]) {
        state = step(&state, letter);
    }
    Ok(state)
}

/// The change-of-basis vectors attached to a state: cF, xSK, xTK on the
/// c-side and gF, vSK, vTK on the g-side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenBasis {
    pub cf: ModVec,
    pub xsk: ModVec,
    pub xtk: ModVec,
    pub gf: ModVec,
    pub vsk: ModVec,
    pub vtk: ModVec,
}

pub fn eigen_basis(state: &PatternState) -> EigenBasis {
    let [ck, cs, ct] = &state.c;
    let [gk, gs, gt] = &state.g;
    EigenBasis {
        cf: &(ck + cs) + ct,
        xsk: ck + cs,
        xtk: -&(ck + ct),
        gf: &(gs + gt) - gk,
        vsk: gk - gs,
        vtk: gk - gt,
    }
}

/// Inverts `eigen_basis`: returns the (c, g) triples in role order (K, S, T).
pub fn recover(basis: &EigenBasis) -> ([ModVec; 3], [ModVec; 3]) {
    let c = [
        &(&-&basis.cf + &basis.xsk) - &basis.xtk,
        &basis.cf + &basis.xtk,
        &basis.cf - &basis.xsk,
    ];
    let g = [
        &(&basis.gf + &basis.vsk) + &basis.vtk,
        &basis.gf + &basis.vtk,
        &basis.gf + &basis.vsk,
    ];
    (c, g)
}

/// Closed form of the eigen-basis vectors at the trunk walk [i]S^n.
pub fn trunk_closed_form(sign_pattern: SignPattern, i: u8, n: usize) -> Result<EigenBasis> {
    let kst = initial_kst(sign_pattern, i)?;
    let (ek, es, et) = (
        ModVec::unit(kst.k as usize),
        ModVec::unit(kst.s as usize),
        ModVec::unit(kst.t as usize),
    );
    let n = n as i64;
    Ok(EigenBasis {
        cf: frak_c(),
        xsk: &ek + &es,
        xtk: &(&ek - &et) + &(&(&ek + &es) * n),
        gf: &(&ek + &et) - &es,
        vsk: &es - &ek,
        vtk: &(&es - &et) + &(&(&es - &ek) * (n + 1)),
    })
}

/// Closed form of the eigen-basis vectors at the branch root [i]S^nT.
pub fn branch_root_closed_form(sign_pattern: SignPattern, i: u8, n: usize) -> Result<EigenBasis> {
    let kst = initial_kst(sign_pattern, i)?;
    let (ek, es, et) = (
        ModVec::unit(kst.k as usize),
        ModVec::unit(kst.s as usize),
        ModVec::unit(kst.t as usize),
    );
    let n = n as i64;
    Ok(EigenBasis {
        cf: frak_c(),
        xsk: &(&ek + &et) + &(&(&ek + &es) * (n + 1)),
        xtk: &(&ek + &et) + &(&(&ek + &es) * n),
        gf: frak_g(sign_pattern, i)?,
        vsk: &(&ek - &et) + &(&(&es - &ek) * (n + 1)),
        vtk: &(&ek - &et) + &(&(&es - &ek) * n),
    })
}
