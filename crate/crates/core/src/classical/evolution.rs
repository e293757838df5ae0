use ndarray::Array2;

use super::{AreaPreservingMap, PhaseDensity};
use crate::field::{GeometryKind, PhaseSpaceField, PhaseSpaceGeometry};
use crate::PhasePoint;

/// Grid nodes pulled back through `t` inverse steps.
#[derive(Debug, Clone)]
pub struct BackTrajectoryState {
    geometry: PhaseSpaceGeometry,
    points: Vec<PhasePoint>,
    t: usize,
}

impl BackTrajectoryState {
    pub fn new(geometry: PhaseSpaceGeometry) -> Self {
        Self {
            geometry,
            points: geometry.nodes().collect(),
            t: 0,
        }
    }

    pub fn time(&self) -> usize {
        self.t
    }

    pub fn geometry(&self) -> &PhaseSpaceGeometry {
        &self.geometry
    }

    pub fn points(&self) -> &[PhasePoint] {
        &self.points
    }

    /// `y ← M⁻¹(y)` at every node.
    pub fn step(&mut self, map: &dyn AreaPreservingMap) {
        let wrap = self.geometry.kind == GeometryKind::Torus;
        for y in &mut self.points {
            let next = map.inverse(*y);
            *y = if wrap { next.wrapped() } else { next };
        }
        self.t += 1;
    }

    /// `ρ₀(M⁻ᵗ(x))` at the nodes.
    pub fn materialize(&self, rho0: &dyn PhaseDensity) -> PhaseSpaceField {
        let m = self.geometry.m;
        let values: Vec<f64> = self.points.iter().map(|&y| rho0.eval(y)).collect();
        let values = Array2::from_shape_vec((m, m), values).expect("one point per node");
        PhaseSpaceField::new(self.geometry, values).expect("shape matches geometry")
    }
}

/// One Perron-Frobenius step.
pub fn pf_evolve(
    mut state: BackTrajectoryState,
    map: &dyn AreaPreservingMap,
) -> BackTrajectoryState {
    state.step(map);
    state
}

/// Iterator over `ρ₀, ρ₁, …, ρ_{t_max}`.
#[derive(Debug)]
pub struct PfSeries<'a> {
    state: BackTrajectoryState,
    map: &'a dyn AreaPreservingMap,
    rho0: &'a dyn PhaseDensity,
    t_max: usize,
    started: bool,
}

impl<'a> PfSeries<'a> {
    pub fn new(
        geometry: PhaseSpaceGeometry,
        map: &'a dyn AreaPreservingMap,
        rho0: &'a dyn PhaseDensity,
        t_max: usize,
    ) -> Self {
        Self {
            state: BackTrajectoryState::new(geometry),
            map,
            rho0,
            t_max,
            started: false,
        }
    }
}

impl Iterator for PfSeries<'_> {
    type Item = PhaseSpaceField;

    fn next(&mut self) -> Option<PhaseSpaceField> {
        if self.started {
            if self.state.time() >= self.t_max {
                return None;
            }
            self.state.step(self.map);
        }
        self.started = true;
        Some(self.state.materialize(self.rho0))
    }
}
