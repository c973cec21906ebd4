//! MOOD system factors. Constructors are not members for these factors.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::coupling::coupling_factor;
use crate::error::{Error, Result};
use crate::model::{SystemModel, Visibility};

/// Factor values as ratios. `None` means undefined (an empty denominator).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoodFactors {
    pub mhf: Option<f64>,
    pub ahf: Option<f64>,
    pub mif: Option<f64>,
    pub aif: Option<f64>,
    pub cf: Option<f64>,
    pub pf: Option<f64>,
}

impl MoodFactors {
    /// Percentage with one decimal.
    pub fn percent(v: Option<f64>) -> Option<f64> {
        v.map(|x| (x * 1000.0).round() / 10.0)
    }
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den > 0.0).then(|| num / den)
}

pub fn mood(model: &SystemModel) -> Result<MoodFactors> {
    let classes: Vec<_> = model.system_classes().collect();
    let tc = classes.len();
    if tc < 2 {
        return Err(Error::DegenerateSystem(format!(
            "MOOD needs at least two classes, got {tc}"
        )));
    }
    let others = (tc - 1) as f64;
    let hidden = |vis: Visibility, descendants: usize| match vis {
        Visibility::Private => 1.0,
        Visibility::Protected => (others - descendants as f64) / others,
        Visibility::Public | Visibility::Default => 0.0,
    };

    let (mut mh, mut m_total, mut ah, mut a_total) = (0.0, 0.0, 0.0, 0.0);
    let (mut m_inh, mut m_avail, mut a_inh, mut a_avail) = (0.0, 0.0, 0.0, 0.0);
    let (mut overrides, mut pf_den) = (0.0, 0.0);
    for c in &classes {
        let desc = model.descendants(&c.name)?.len();
        let declared: Vec<_> = c.methods.iter().filter(|m| !m.is_constructor).collect();
        for m in &declared {
            mh += hidden(m.visibility, desc);
        }
        m_total += declared.len() as f64;
        for a in &c.attributes {
            ah += hidden(a.visibility, desc);
        }
        a_total += c.attributes.len() as f64;

        let inherited = model.inherited_methods(&c.name)?.len() as f64;
        m_inh += inherited;
        m_avail += inherited + declared.len() as f64;
        let inherited_attrs = model.inherited_attributes(&c.name)?.len() as f64;
        a_inh += inherited_attrs;
        a_avail += inherited_attrs + c.attributes.len() as f64;

        // signatures visible from ancestors, for override detection
        let mut above: BTreeSet<String> = BTreeSet::new();
        for anc in model.ancestors(&c.name)? {
            for m in &model.class(anc)?.methods {
                if !m.is_constructor && m.visibility != Visibility::Private {
                    above.insert(m.signature());
                }
            }
        }
        let over = declared.iter().filter(|m| above.contains(&m.signature())).count();
        overrides += over as f64;
        pf_den += ((declared.len() - over) * desc) as f64;
    }
    Ok(MoodFactors {
        mhf: ratio(mh, m_total),
        ahf: ratio(ah, a_total),
        mif: ratio(m_inh, m_avail),
        aif: ratio(a_inh, a_avail),
        cf: coupling_factor(model).ok(),
        pf: ratio(overrides, pf_den),
    })
}
