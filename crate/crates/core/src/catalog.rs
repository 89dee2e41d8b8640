//! Named tangles and Reidemeister-related pairs, the source of the bundled
//! corpus.

use crate::construct::{twist, BraidTangle, Step};
use crate::tangle::{Result, TangleDiagram};

fn x(at: usize, left_over: bool) -> Step {
    Step::Cross { at, left_over }
}

fn kink(at: usize, vertical_under: bool) -> Step {
    Step::Kink { at, vertical_under }
}

fn with_steps(b: &BraidTangle, before: &[Step], after: &[Step]) -> BraidTangle {
    let mut out = b.clone();
    out.steps = before.iter().chain(b.steps.iter()).chain(after.iter()).copied().collect();
    out
}

#[derive(Debug, Clone)]
pub struct Named {
    pub name: String,
    pub braid: BraidTangle,
    /// closure the orientation is chosen to extend over
    pub closure: u8,
}

impl Named {
    fn new(name: &str, braid: BraidTangle, closure: u8) -> Self {
        Self { name: name.into(), braid, closure }
    }

    pub fn diagram(&self) -> Result<TangleDiagram> {
        self.braid.oriented(self.closure)
    }
}

/// Three strands capped on the left: closure 1 is the figure-eight knot.
pub fn figure_eight() -> BraidTangle {
    BraidTangle::new(3, &[0], &[], &[x(1, true), x(0, false), x(1, true), x(0, false)])
}

/// Four strands capped in pairs: closure 0 is the figure-eight knot.
pub fn figure_eight_plat() -> BraidTangle {
    BraidTangle::new(4, &[0, 2], &[], &[x(1, true), x(2, false), x(1, true), x(2, false)])
}

pub fn tangles() -> Vec<Named> {
    let mut out = vec![
        Named::new("crossingless_t0", BraidTangle::new(2, &[], &[], &[]), 0),
        Named::new("crossingless_t1", BraidTangle::new(2, &[], &[], &[]).rotated(1), 0),
        Named::new("crossing", twist(1, false), 0),
        Named::new("crossing_mirror", twist(1, true), 0),
        Named::new("trefoil_right", twist(3, false), 0),
        Named::new("trefoil_left", twist(3, true), 0),
        Named::new("trefoil_capped", BraidTangle::new(3, &[0], &[], &[x(1, true), x(0, false), x(1, true), x(0, false)]), 0),
        Named::new("hopf_positive", twist(2, false), 0),
        Named::new("hopf_negative", twist(2, true), 0),
        Named::new("hopf_plat", BraidTangle::new(4, &[0, 2], &[], &[x(1, true), x(1, true)]), 1),
        Named::new("figure_eight", figure_eight(), 1),
        Named::new("figure_eight_plat", figure_eight_plat(), 0),
        Named::new(
            "plat_five",
            BraidTangle::new(4, &[0, 2], &[], &[x(1, true), x(0, false), x(1, true), x(2, false), x(1, true)]),
            1,
        ),
        Named::new(
            "plat_six",
            BraidTangle::new(4, &[0, 2], &[], &[x(1, true), x(2, true), x(1, false), x(0, true), x(1, false), x(2, true)]),
            0,
        ),
        Named::new("kinked_crossing", BraidTangle::new(2, &[], &[], &[kink(0, true), x(0, false), kink(1, false)]), 0),
    ];
    for n in 4..=8 {
        out.push(Named::new(&format!("torus_2_{n}"), twist(n, false), 0));
    }
    for n in [5, 7] {
        out.push(Named::new(&format!("torus_2_{n}_mirror"), twist(n, true), 0));
    }
    out
}

#[derive(Debug, Clone)]
pub struct MovePair {
    pub name: String,
    pub mv: String,
    pub first: BraidTangle,
    pub second: BraidTangle,
    pub closure: u8,
}

impl MovePair {
    fn new(name: &str, mv: &str, first: BraidTangle, second: BraidTangle, closure: u8) -> Self {
        Self { name: name.into(), mv: mv.into(), first, second, closure }
    }

    pub fn diagrams(&self) -> Result<(TangleDiagram, TangleDiagram)> {
        Ok((self.first.oriented(self.closure)?, self.second.oriented(self.closure)?))
    }
}

pub fn move_pairs() -> Vec<MovePair> {
    let plain = BraidTangle::new(2, &[], &[], &[]);
    let capped3 = |steps: &[Step]| BraidTangle::new(3, &[0], &[], steps);
    let r3_pos = [x(0, true), x(1, true), x(0, true)];
    let r3_pos_other = [x(1, true), x(0, true), x(1, true)];
    let r3_neg = [x(0, false), x(1, false), x(0, false)];
    let r3_neg_other = [x(1, false), x(0, false), x(1, false)];
    vec![
        MovePair::new("r1_vertical_under", "R1", plain.clone(), with_steps(&plain, &[kink(0, true)], &[]), 0),
        MovePair::new("r1_vertical_over", "R1", plain.clone(), with_steps(&plain, &[kink(1, false)], &[]), 0),
        MovePair::new("r1_on_hopf", "R1", twist(2, false), with_steps(&twist(2, false), &[], &[kink(0, true)]), 0),
        MovePair::new("r1_on_trefoil", "R1", twist(3, true), with_steps(&twist(3, true), &[kink(1, false)], &[]), 0),
        MovePair::new("r1_on_figure_eight", "R1", figure_eight(), with_steps(&figure_eight(), &[], &[kink(2, true)]), 1),
        MovePair::new("r2_crossingless", "R2", plain.clone(), with_steps(&plain, &[x(0, true), x(0, false)], &[]), 0),
        MovePair::new("r2_on_crossing", "R2", twist(1, false), with_steps(&twist(1, false), &[x(0, false), x(0, true)], &[]), 0),
        MovePair::new(
            "r2_in_figure_eight",
            "R2",
            figure_eight(),
            capped3(&[x(1, true), x(0, false), x(0, true), x(0, false), x(1, true), x(0, false)]),
            1,
        ),
        MovePair::new(
            "r2_in_plat",
            "R2",
            figure_eight_plat(),
            with_steps(&figure_eight_plat(), &[x(0, true), x(0, false)], &[]),
            0,
        ),
        MovePair::new("r3_positive", "R3", capped3(&r3_pos), capped3(&r3_pos_other), 0),
        MovePair::new("r3_negative", "R3", capped3(&r3_neg), capped3(&r3_neg_other), 1),
        MovePair::new(
            "r3_in_longer_word",
            "R3",
            capped3(&[x(1, false), x(0, true), x(1, true), x(0, true), x(1, false)]),
            capped3(&[x(1, false), x(1, true), x(0, true), x(1, true), x(1, false)]),
            0,
        ),
        MovePair::new(
            "r3_in_plat",
            "R3",
            BraidTangle::new(4, &[0, 2], &[], &[x(0, true), x(1, true), x(0, true), x(2, false)]),
            BraidTangle::new(4, &[0, 2], &[], &[x(1, true), x(0, true), x(1, true), x(2, false)]),
            1,
        ),
    ]
}
