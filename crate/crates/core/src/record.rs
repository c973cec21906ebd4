//! Everything measured for one class, in one place.

use serde::{Deserialize, Serialize};

use crate::cohesion::{self, CohesionGraph, LcomVariant};
use crate::complexity::class_wmc;
use crate::coupling::{self, LogiscopeMetrics};
use crate::error::Result;
use crate::model::SystemModel;
use crate::qmood::{qmood_class_metrics, QmoodClassMetrics};

/// Cohesion values; `None` where the measure is undefined for the class.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CohesionMetrics {
    pub lcom_ck: Option<f64>,
    pub lcom_lh: Option<f64>,
    pub lcom_hm: Option<f64>,
    pub lcom_hs: Option<f64>,
    pub tcc: Option<f64>,
    pub lcc: Option<f64>,
    pub coh: Option<f64>,
    pub sim_cohesion: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetricsRecord {
    pub class: String,
    pub cbo: u32,
    pub rfc: u32,
    pub wmc: u32,
    pub dit: u32,
    pub noc: u32,
    pub mpc: u32,
    pub dac: u32,
    pub cohesion: CohesionMetrics,
    pub logiscope: LogiscopeMetrics,
    pub qmood: QmoodClassMetrics,
}

pub fn class_record(model: &SystemModel, c: &str) -> Result<ClassMetricsRecord> {
    let class = model.class(c)?;
    let g = CohesionGraph::of(class);
    let tl = cohesion::tcc_lcc_of(&g).ok();
    Ok(ClassMetricsRecord {
        class: class.name.clone(),
        cbo: coupling::cbo(model, c)?,
        rfc: coupling::rfc(model, c)?,
        wmc: class_wmc(class),
        dit: coupling::dit(model, c)?,
        noc: coupling::noc(model, c)?,
        mpc: coupling::mpc(model, c)?,
        dac: coupling::dac(model, c)?,
        cohesion: CohesionMetrics {
            lcom_ck: cohesion::lcom_of(&g, LcomVariant::CK).ok(),
            lcom_lh: cohesion::lcom_of(&g, LcomVariant::LH).ok(),
            lcom_hm: cohesion::lcom_of(&g, LcomVariant::HM).ok(),
            lcom_hs: cohesion::lcom_of(&g, LcomVariant::HS).ok(),
            tcc: tl.map(|t| t.0),
            lcc: tl.map(|t| t.1),
            coh: cohesion::coh_of(&g).ok(),
            sim_cohesion: cohesion::similarity_cohesion_of(&g).ok(),
        },
        logiscope: coupling::logiscope_mnemonics(model, c)?,
        qmood: qmood_class_metrics(model, c)?,
    })
}

/// Records for every system class, in name order.
pub fn system_records(model: &SystemModel) -> Result<Vec<ClassMetricsRecord>> {
    use rayon::prelude::*;
    let names: Vec<&str> = model.system_classes().map(|c| c.name.as_str()).collect();
    names.par_iter().map(|c| class_record(model, c)).collect()
}
