use serde::{Deserialize, Serialize};

use crate::features::Label;

/// Binary confusion matrix with spam as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

fn f_score(tp: usize, fp: usize, fn_: usize) -> f64 {
    let p = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
    let r = if tp + fn_ == 0 { 0.0 } else { tp as f64 / (tp + fn_) as f64 };
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

impl ConfusionMatrix {
    pub fn record(&mut self, actual: Label, predicted: Label) {
        match (actual, predicted) {
            (Label::Spam, Label::Spam) => self.tp += 1,
            (Label::NonSpam, Label::Spam) => self.fp += 1,
            (Label::NonSpam, Label::NonSpam) => self.tn += 1,
            (Label::Spam, Label::NonSpam) => self.fn_ += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn add(&self, o: &ConfusionMatrix) -> ConfusionMatrix {
        ConfusionMatrix {
            tp: self.tp + o.tp,
            fp: self.fp + o.fp,
            tn: self.tn + o.tn,
            fn_: self.fn_ + o.fn_,
        }
    }

    /// The same matrix with the class names swapped.
    pub fn transposed_classes(&self) -> ConfusionMatrix {
        ConfusionMatrix {
            tp: self.tn,
            fp: self.fn_,
            tn: self.tp,
            fn_: self.fp,
        }
    }

    /// Percent correct; 0 for an empty matrix.
    pub fn accuracy(&self) -> f64 {
        let t = self.total();
        if t == 0 {
            0.0
        } else {
            100.0 * (self.tp + self.tn) as f64 / t as f64
        }
    }

    pub fn f_score_spam(&self) -> f64 {
        f_score(self.tp, self.fp, self.fn_)
    }

    pub fn f_score_non_spam(&self) -> f64 {
        f_score(self.tn, self.fn_, self.fp)
    }

    /// Class F-scores weighted by true class support.
    pub fn f_score_weighted(&self) -> f64 {
        let t = self.total();
        if t == 0 {
            return 0.0;
        }
        let spam = (self.tp + self.fn_) as f64;
        let non = (self.tn + self.fp) as f64;
        (self.f_score_spam() * spam + self.f_score_non_spam() * non) / t as f64
    }
}
