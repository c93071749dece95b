use serde::Serialize;

use crate::materials::{Polarization, Sector};
use crate::quadrature::Components;

/// A quantity split over {TE, TM} × {propagating, evanescent}.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct SectorSpectrum {
    pub te_propagating: f64,
    pub te_evanescent: f64,
    pub tm_propagating: f64,
    pub tm_evanescent: f64,
}

impl SectorSpectrum {
    pub fn total(&self) -> f64 {
        self.te_propagating + self.te_evanescent + self.tm_propagating + self.tm_evanescent
    }

    pub fn propagating(&self) -> f64 {
        self.te_propagating + self.tm_propagating
    }

    pub fn evanescent(&self) -> f64 {
        self.te_evanescent + self.tm_evanescent
    }

    pub fn get(&self, pol: Polarization, sector: Sector) -> f64 {
        match (pol, sector) {
            (Polarization::TE, Sector::Propagating) => self.te_propagating,
            (Polarization::TE, Sector::Evanescent) => self.te_evanescent,
            (Polarization::TM, Sector::Propagating) => self.tm_propagating,
            (Polarization::TM, Sector::Evanescent) => self.tm_evanescent,
        }
    }

    pub fn components(&self) -> Components<4> {
        Components([
            self.te_propagating,
            self.te_evanescent,
            self.tm_propagating,
            self.tm_evanescent,
        ])
    }

    pub fn from_components(c: Components<4>) -> Self {
        Self {
            te_propagating: c.0[0],
            te_evanescent: c.0[1],
            tm_propagating: c.0[2],
            tm_evanescent: c.0[3],
        }
    }
}

