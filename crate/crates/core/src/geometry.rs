//! Axis-aligned boxes, per-frame target states and overlap scores.

use serde::{Deserialize, Serialize};

/// Axis-aligned rectangle in continuous pixel coordinates.
///
/// `(x, y)` is the top-left corner; `w` and `h` are non-negative extents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl BoundingBox {
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        Self { x, y, w, h }
    }

    /// Finite coordinates and non-negative extents.
    pub fn is_valid(&self) -> bool {
        [self.x, self.y, self.w, self.h].iter().all(|v| v.is_finite()) && self.w >= 0.0 && self.h >= 0.0
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.h
    }

    pub fn translate(&self, dx: f64, dy: f64) -> Self {
        Self::new(self.x + dx, self.y + dy, self.w, self.h)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.w * s, self.h * s)
    }

    pub fn intersection_area(&self, other: &Self) -> f64 {
        let iw = self.right().min(other.right()) - self.x.max(other.x);
        let ih = self.bottom().min(other.bottom()) - self.y.max(other.y);
        if iw <= 0.0 || ih <= 0.0 {
            0.0
        } else {
            iw * ih
        }
    }
}

/// Intersection over union of two boxes. A zero-area union scores 0.
pub fn iou(a: &BoundingBox, b: &BoundingBox) -> f64 {
    if a == b && a.area() > 0.0 {
        return 1.0;
    }
    let inter = a.intersection_area(b);
    let union = a.area() + b.area() - inter;
    if union <= 0.0 {
        return 0.0;
    }
    (inter / union).clamp(0.0, 1.0)
}

/// Target state for one frame: `None` when the target is absent (ground truth)
/// or no prediction was made (tracker output).
pub type Frame = Option<BoundingBox>;

/// Overlap of one aligned (ground truth, prediction) frame pair.
///
/// Returns `None` when the ground truth is absent, which excludes the frame from
/// every per-frame statistic. A missing prediction scores 0.
pub fn frame_iou(gt: &Frame, pred: &Frame) -> Option<f64> {
    match (gt, pred) {
        (None, _) => None,
        (Some(_), None) => Some(0.0),
        (Some(g), Some(p)) => Some(iou(g, p)),
    }
}

/// Per-frame target states of one video, in frame order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    frames: Vec<Frame>,
}

impl Trajectory {
    pub fn new(frames: Vec<Frame>) -> Self {
        Self { frames }
    }

    pub fn from_boxes(boxes: impl IntoIterator<Item = BoundingBox>) -> Self {
        Self::new(boxes.into_iter().map(Some).collect())
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn get(&self, index: usize) -> Option<&Frame> {
        self.frames.get(index)
    }

    pub fn present_count(&self) -> usize {
        self.frames.iter().filter(|f| f.is_some()).count()
    }
}

impl FromIterator<Frame> for Trajectory {
    fn from_iter<I: IntoIterator<Item = Frame>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bx(x: f64, y: f64, w: f64, h: f64) -> BoundingBox {
        BoundingBox::new(x, y, w, h)
    }

    #[test]
    fn identical_boxes() {
        assert_eq!(iou(&bx(0., 0., 10., 10.), &bx(0., 0., 10., 10.)), 1.0);
    }

    #[test]
    fn disjoint_boxes() {
        assert_eq!(iou(&bx(0., 0., 1., 1.), &bx(5., 5., 1., 1.)), 0.0);
    }

    #[test]
    fn partial_overlap() {
        // intersection 1, union 4 + 4 - 1
        let v = iou(&bx(0., 0., 2., 2.), &bx(1., 1., 2., 2.));
        assert!((v - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn touching_edges_do_not_overlap() {
        assert_eq!(iou(&bx(0., 0., 2., 2.), &bx(2., 0., 2., 2.)), 0.0);
    }

    #[test]
    fn degenerate_union_scores_zero() {
        assert_eq!(iou(&bx(3., 3., 0., 0.), &bx(3., 3., 0., 0.)), 0.0);
        assert_eq!(iou(&bx(0., 0., 0., 5.), &bx(0., 0., 4., 4.)), 0.0);
    }

    #[test]
    fn frame_absence_rules() {
        let g = Some(bx(0., 0., 4., 4.));
        assert_eq!(frame_iou(&g, &None), Some(0.0));
        assert_eq!(frame_iou(&None, &g), None);
        assert_eq!(frame_iou(&None, &None), None);
        let v = frame_iou(&Some(bx(0., 0., 2., 2.)), &Some(bx(1., 1., 2., 2.))).unwrap();
        assert!((v - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn validity() {
        assert!(bx(0., 0., 0., 0.).is_valid());
        assert!(!bx(0., 0., -1., 2.).is_valid());
        assert!(!bx(f64::NAN, 0., 1., 1.).is_valid());
    }

    fn arb_box() -> impl Strategy<Value = BoundingBox> {
        (-500.0..500.0f64, -500.0..500.0f64, 0.0..300.0f64, 0.0..300.0f64).prop_map(|(x, y, w, h)| bx(x, y, w, h))
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded(a in arb_box(), b in arb_box()) {
            let ab = iou(&a, &b);
            prop_assert_eq!(ab, iou(&b, &a));
            prop_assert!((0.0..=1.0).contains(&ab));
        }

        #[test]
        fn self_overlap_is_one(a in arb_box()) {
            prop_assume!(a.area() > 0.0);
            prop_assert!((iou(&a, &a) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn translation_and_scale_invariant(
            a in arb_box(), b in arb_box(),
            dx in -1e3..1e3f64, dy in -1e3..1e3f64, s in 0.01..100.0f64,
        ) {
            let base = iou(&a, &b);
            let moved = iou(&a.translate(dx, dy), &b.translate(dx, dy));
            let scaled = iou(&a.scale(s), &b.scale(s));
            prop_assert!((base - moved).abs() < 1e-9);
            prop_assert!((base - scaled).abs() < 1e-9);
        }
    }
}
