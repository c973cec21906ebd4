//! QMOOD design metrics, design properties and quality indices.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{element_type, SystemModel, Visibility};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QmoodClassMetrics {
    /// Share of private and protected attributes; `None` without attributes.
    pub dam: Option<f64>,
    pub dcc: u32,
    /// Parameter-type relatedness; `None` when no method takes parameters.
    pub cam: Option<f64>,
    pub moa: u32,
    /// Share of inherited methods among all available; `None` when there are none.
    pub mfa: Option<f64>,
    pub nop: u32,
    pub cis: u32,
    pub nom: u32,
}

pub fn qmood_class_metrics(model: &SystemModel, c: &str) -> Result<QmoodClassMetrics> {
    let class = model.class(c)?;
    let attrs = class.attributes.len();
    let hidden = class
        .attributes
        .iter()
        .filter(|a| matches!(a.visibility, Visibility::Private | Visibility::Protected))
        .count();
    let dam = (attrs > 0).then(|| hidden as f64 / attrs as f64);

    let system_type = |t: &str| {
        let e = element_type(t);
        (e != class.name && model.is_system_class(e)).then(|| e.to_string())
    };
    let mut related: BTreeSet<String> = BTreeSet::new();
    related.extend(class.attributes.iter().filter_map(|a| system_type(&a.declared_type)));
    for m in &class.methods {
        related.extend(m.parameter_types.iter().filter_map(|p| system_type(p)));
    }

    let param_sets: Vec<BTreeSet<&str>> = class
        .methods
        .iter()
        .filter(|m| !m.is_constructor)
        .map(|m| m.parameter_types.iter().map(String::as_str).collect())
        .collect();
    let all: BTreeSet<&str> = param_sets.iter().flatten().copied().collect();
    let cam = (!all.is_empty()).then(|| {
        let sum: usize = param_sets.iter().map(BTreeSet::len).sum();
        sum as f64 / (param_sets.len() * all.len()) as f64
    });

    let moa = class
        .attributes
        .iter()
        .filter(|a| model.is_system_class(element_type(&a.declared_type)))
        .count() as u32;

    let inherited = model.inherited_methods(c)?.len();
    let declared = class.methods.iter().filter(|m| !m.is_constructor).count();
    let mfa = (inherited + declared > 0).then(|| inherited as f64 / (inherited + declared) as f64);

    Ok(QmoodClassMetrics {
        dam,
        dcc: related.len() as u32,
        cam,
        moa,
        mfa,
        nop: class.methods.iter().filter(|m| m.is_abstract).count() as u32,
        cis: class
            .methods
            .iter()
            .filter(|m| m.visibility == Visibility::Public)
            .count() as u32,
        nom: class.methods.len() as u32,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QmoodSystemMetrics {
    pub dsc: u32,
    pub noh: u32,
    pub ana: f64,
}

pub fn qmood_system_metrics(model: &SystemModel) -> Result<QmoodSystemMetrics> {
    let classes: Vec<_> = model.system_classes().collect();
    if classes.is_empty() {
        return Err(Error::EmptyModel);
    }
    let mut noh = 0;
    let mut ancestors = 0usize;
    for c in &classes {
        let anc = model.ancestors(&c.name)?;
        ancestors += anc.len();
        if model.parents(&c.name)?.is_empty() && !model.children(&c.name)?.is_empty() {
            noh += 1;
        }
    }
    Ok(QmoodSystemMetrics {
        dsc: classes.len() as u32,
        noh,
        ana: ancestors as f64 / classes.len() as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Property {
    DesignSize,
    Hierarchies,
    Abstraction,
    Encapsulation,
    Coupling,
    Cohesion,
    Composition,
    Inheritance,
    Polymorphism,
    Messaging,
    Complexity,
}

impl Property {
    pub const ALL: [Property; 11] = [
        Property::DesignSize,
        Property::Hierarchies,
        Property::Abstraction,
        Property::Encapsulation,
        Property::Coupling,
        Property::Cohesion,
        Property::Composition,
        Property::Inheritance,
        Property::Polymorphism,
        Property::Messaging,
        Property::Complexity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Property::DesignSize => "Design Size",
            Property::Hierarchies => "Hierarchies",
            Property::Abstraction => "Abstraction",
            Property::Encapsulation => "Encapsulation",
            Property::Coupling => "Coupling",
            Property::Cohesion => "Cohesion",
            Property::Composition => "Composition",
            Property::Inheritance => "Inheritance",
            Property::Polymorphism => "Polymorphism",
            Property::Messaging => "Messaging",
            Property::Complexity => "Complexity",
        }
    }

    /// Design metric the property is measured by.
    pub fn metric(self) -> &'static str {
        match self {
            Property::DesignSize => "DSC",
            Property::Hierarchies => "NOH",
            Property::Abstraction => "ANA",
            Property::Encapsulation => "DAM",
            Property::Coupling => "DCC",
            Property::Cohesion => "CAM",
            Property::Composition => "MOA",
            Property::Inheritance => "MFA",
            Property::Polymorphism => "NOP",
            Property::Messaging => "CIS",
            Property::Complexity => "NOM",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Design property values in [`Property::ALL`] order; `None` marks an
/// undefined component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropertyVector(pub [Option<f64>; 11]);

impl PropertyVector {
    pub fn uniform(v: f64) -> Self {
        PropertyVector([Some(v); 11])
    }

    pub fn get(&self, p: Property) -> Option<f64> {
        self.0[p as usize]
    }

    pub fn set(&mut self, p: Property, v: Option<f64>) {
        self.0[p as usize] = v;
    }

    /// Componentwise ratio to a baseline; zero or undefined baseline
    /// components give undefined results.
    pub fn normalized(&self, baseline: &PropertyVector) -> PropertyVector {
        let mut out = [None; 11];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = match (self.0[i], baseline.0[i]) {
                (Some(v), Some(b)) if b != 0.0 => Some(v / b),
                _ => None,
            };
        }
        PropertyVector(out)
    }
}

fn mean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let (mut sum, mut n) = (0.0, 0usize);
    for v in values.flatten() {
        sum += v;
        n += 1;
    }
    (n > 0).then(|| sum / n as f64)
}

/// Raw property vector of a model, optionally normalized by a baseline vector.
pub fn property_vector(model: &SystemModel, baseline: Option<&PropertyVector>) -> Result<PropertyVector> {
    let sys = qmood_system_metrics(model)?;
    let per: Vec<QmoodClassMetrics> = model
        .system_classes()
        .map(|c| qmood_class_metrics(model, &c.name))
        .collect::<Result<_>>()?;
    let avg = |f: fn(&QmoodClassMetrics) -> Option<f64>| mean(per.iter().map(f));
    let mut p = PropertyVector([None; 11]);
    p.set(Property::DesignSize, Some(sys.dsc as f64));
    p.set(Property::Hierarchies, Some(sys.noh as f64));
    p.set(Property::Abstraction, Some(sys.ana));
    p.set(Property::Encapsulation, avg(|m| m.dam));
    p.set(Property::Coupling, avg(|m| Some(m.dcc as f64)));
    p.set(Property::Cohesion, avg(|m| m.cam));
    p.set(Property::Composition, avg(|m| Some(m.moa as f64)));
    p.set(Property::Inheritance, avg(|m| m.mfa));
    p.set(Property::Polymorphism, avg(|m| Some(m.nop as f64)));
    p.set(Property::Messaging, avg(|m| Some(m.cis as f64)));
    p.set(Property::Complexity, avg(|m| Some(m.nom as f64)));
    Ok(match baseline {
        Some(b) => p.normalized(b),
        None => p,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QualityAttribute {
    Reusability,
    Flexibility,
    Understandability,
    Functionality,
    Extendibility,
    Effectiveness,
}

impl QualityAttribute {
    pub const ALL: [QualityAttribute; 6] = [
        QualityAttribute::Reusability,
        QualityAttribute::Flexibility,
        QualityAttribute::Understandability,
        QualityAttribute::Functionality,
        QualityAttribute::Extendibility,
        QualityAttribute::Effectiveness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            QualityAttribute::Reusability => "Reusability",
            QualityAttribute::Flexibility => "Flexibility",
            QualityAttribute::Understandability => "Understandability",
            QualityAttribute::Functionality => "Functionality",
            QualityAttribute::Extendibility => "Extendibility",
            QualityAttribute::Effectiveness => "Effectiveness",
        }
    }

    /// Weighted design properties of the index.
    pub fn weights(self) -> &'static [(Property, f64)] {
        use Property::*;
        match self {
            QualityAttribute::Reusability => {
                &[(Coupling, -0.25), (Cohesion, 0.25), (Messaging, 0.5), (DesignSize, 0.5)]
            }
            QualityAttribute::Flexibility => &[
                (Encapsulation, 0.25),
                (Coupling, -0.25),
                (Composition, 0.5),
                (Polymorphism, 0.5),
            ],
            QualityAttribute::Understandability => &[
                (Abstraction, -0.33),
                (Encapsulation, 0.33),
                (Coupling, -0.33),
                (Cohesion, 0.33),
                (Polymorphism, -0.33),
                (Complexity, -0.33),
                (DesignSize, -0.33),
            ],
            QualityAttribute::Functionality => &[
                (Cohesion, 0.12),
                (Polymorphism, 0.22),
                (Messaging, 0.22),
                (DesignSize, 0.22),
                (Hierarchies, 0.22),
            ],
            QualityAttribute::Extendibility => &[
                (Abstraction, 0.5),
                (Coupling, -0.5),
                (Inheritance, 0.5),
                (Polymorphism, 0.5),
            ],
            QualityAttribute::Effectiveness => &[
                (Abstraction, 0.2),
                (Encapsulation, 0.2),
                (Composition, 0.2),
                (Inheritance, 0.2),
                (Polymorphism, 0.2),
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QualityIndices {
    pub reusability: f64,
    pub flexibility: f64,
    pub understandability: f64,
    pub functionality: f64,
    pub extendibility: f64,
    pub effectiveness: f64,
    pub tqi: f64,
}

impl QualityIndices {
    pub fn get(&self, q: QualityAttribute) -> f64 {
        match q {
            QualityAttribute::Reusability => self.reusability,
            QualityAttribute::Flexibility => self.flexibility,
            QualityAttribute::Understandability => self.understandability,
            QualityAttribute::Functionality => self.functionality,
            QualityAttribute::Extendibility => self.extendibility,
            QualityAttribute::Effectiveness => self.effectiveness,
        }
    }
}

pub fn quality_index(p: &PropertyVector, q: QualityAttribute) -> Result<f64> {
    q.weights().iter().try_fold(0.0, |acc, &(prop, w)| {
        p.get(prop).map(|v| acc + w * v).ok_or_else(|| Error::MissingProperty {
            index: q.as_str().to_string(),
            property: prop.as_str().to_string(),
        })
    })
}

pub fn quality_indices(p: &PropertyVector) -> Result<QualityIndices> {
    let mut v = [0.0; 6];
    for (slot, q) in v.iter_mut().zip(QualityAttribute::ALL) {
        *slot = quality_index(p, q)?;
    }
    Ok(QualityIndices {
        reusability: v[0],
        flexibility: v[1],
        understandability: v[2],
        functionality: v[3],
        extendibility: v[4],
        effectiveness: v[5],
        tqi: v.iter().sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_properties() {
        let q = quality_indices(&PropertyVector::uniform(1.0)).unwrap();
        assert!((q.reusability - 1.0).abs() < 1e-12);
        assert!((q.flexibility - 1.0).abs() < 1e-12);
        assert!((q.understandability + 0.99).abs() < 1e-12);
        assert!((q.functionality - 1.0).abs() < 1e-12);
        assert!((q.extendibility - 1.0).abs() < 1e-12);
        assert!((q.effectiveness - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_properties() {
        let q = quality_indices(&PropertyVector::uniform(0.0)).unwrap();
        assert_eq!(q.tqi, 0.0);
    }

    #[test]
    fn messaging_doubling() {
        let base = PropertyVector::uniform(1.0);
        let mut more = base;
        more.set(Property::Messaging, Some(2.0));
        let (a, b) = (quality_indices(&base).unwrap(), quality_indices(&more).unwrap());
        assert!((b.reusability - a.reusability - 0.5).abs() < 1e-12);
        assert!((b.functionality - a.functionality - 0.22).abs() < 1e-12);
    }

    #[test]
    fn missing_property_names_index() {
        let mut p = PropertyVector::uniform(1.0);
        p.set(Property::Cohesion, None);
        match quality_indices(&p) {
            Err(Error::MissingProperty { index, property }) => {
                assert_eq!(index, "Reusability");
                assert_eq!(property, "Cohesion");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_baseline_component_is_undefined() {
        let mut b = PropertyVector::uniform(2.0);
        b.set(Property::Hierarchies, Some(0.0));
        let n = PropertyVector::uniform(1.0).normalized(&b);
        assert_eq!(n.get(Property::Hierarchies), None);
        assert_eq!(n.get(Property::Coupling), Some(0.5));
    }
}
