//! JSON wire format for forms.
//!
//! `{"frame": "g2", "degree": 3, "terms": [{"idx": [0, 1, 2], "coeff": "1"}]}`

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::exalg::form::Form;
use crate::exalg::frame::CoordFrame;
use crate::scalar::{format_q, parse_q, Q};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub idx: Vec<usize>,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FormJson {
    pub frame: String,
    pub degree: usize,
    pub terms: Vec<TermJson>,
}

impl FormJson {
    pub fn from_form(f: &Form<Q>) -> Self {
        Self {
            frame: f.frame().name().to_string(),
            degree: f.degree(),
            terms: f
                .iter()
                .map(|(idx, c)| TermJson {
                    idx,
                    coeff: format_q(c),
                })
                .collect(),
        }
    }

    /// Builds the form, resolving the frame name with `resolve`.
    pub fn to_form(
        &self,
        resolve: impl Fn(&str) -> Option<Arc<CoordFrame>>,
    ) -> Result<Form<Q>> {
        let frame = resolve(&self.frame).ok_or_else(|| GeomError::Unknown {
            kind: "frame",
            name: self.frame.clone(),
        })?;
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.idx.clone(), parse_q(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        Form::from_terms(&frame, self.degree, terms)
    }
}

pub fn form_to_json(f: &Form<Q>) -> serde_json::Value {
    serde_json::to_value(FormJson::from_form(f)).expect("serializable")
}

pub fn form_from_json(
    v: &serde_json::Value,
    resolve: impl Fn(&str) -> Option<Arc<CoordFrame>>,
) -> Result<Form<Q>> {
    let fj: FormJson =
        serde_json::from_value(v.clone()).map_err(|e| GeomError::Parse(e.to_string()))?;
    fj.to_form(resolve)
}
