//! Row cache for the signed kernel matrix `Q_ij = y_i y_j K(x_i, x_j)`.

use std::rc::Rc;

use super::KernelSpec;

const NIL: usize = usize::MAX;

/// Signed kernel rows with least-recently-used eviction.
///
/// Rows are computed deterministically, so results never depend on capacity.
pub(crate) struct QMatrix<'a> {
    rows: Vec<&'a [f64]>,
    signs: Vec<f64>,
    kernel: KernelSpec,
    diag: Vec<f64>,
    slots: Vec<Option<Rc<[f64]>>>,
    prev: Vec<usize>,
    next: Vec<usize>,
    head: usize,
    tail: usize,
    cached: usize,
    capacity: usize,
    pub(crate) computed_rows: usize,
}

impl<'a> QMatrix<'a> {
    pub(crate) fn new(rows: Vec<&'a [f64]>, signs: Vec<f64>, kernel: KernelSpec, capacity: usize) -> Self {
        let n = rows.len();
        let diag = rows.iter().map(|r| kernel.eval_unchecked(r, r)).collect();
        QMatrix {
            rows,
            signs,
            kernel,
            diag,
            slots: vec![None; n],
            prev: vec![NIL; n],
            next: vec![NIL; n],
            head: NIL,
            tail: NIL,
            cached: 0,
            capacity: capacity.clamp(2, n.max(2)),
            computed_rows: 0,
        }
    }

    #[inline]
    pub(crate) fn diag(&self, i: usize) -> f64 {
        self.diag[i]
    }

    fn unlink(&mut self, i: usize) {
        let (p, n) = (self.prev[i], self.next[i]);
        if p != NIL {
            self.next[p] = n;
        } else {
            self.head = n;
        }
        if n != NIL {
            self.prev[n] = p;
        } else {
            self.tail = p;
        }
        self.prev[i] = NIL;
        self.next[i] = NIL;
    }

    fn push_front(&mut self, i: usize) {
        self.next[i] = self.head;
        self.prev[i] = NIL;
        if self.head != NIL {
            self.prev[self.head] = i;
        }
        self.head = i;
        if self.tail == NIL {
            self.tail = i;
        }
    }

    pub(crate) fn row(&mut self, i: usize) -> Rc<[f64]> {
        if let Some(row) = &self.slots[i] {
            let row = Rc::clone(row);
            self.unlink(i);
            self.push_front(i);
            return row;
        }
        if self.cached == self.capacity {
            let victim = self.tail;
            self.unlink(victim);
            self.slots[victim] = None;
            self.cached -= 1;
        }
        let xi = self.rows[i];
        let yi = self.signs[i];
        let row: Rc<[f64]> = self
            .rows
            .iter()
            .zip(&self.signs)
            .map(|(xj, &yj)| yi * yj * self.kernel.eval_unchecked(xi, xj))
            .collect();
        self.computed_rows += 1;
        self.slots[i] = Some(Rc::clone(&row));
        self.cached += 1;
        self.push_front(i);
        row
    }
}
