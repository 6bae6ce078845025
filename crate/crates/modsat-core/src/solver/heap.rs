//! Indexed binary max-heap over variables, ordered by activity with
//! lower-index-wins tie-breaking so replay runs are deterministic.

use crate::cnf::Var;

#[derive(Debug, Clone, Default)]
pub struct VarOrderHeap {
    heap: Vec<Var>,
    /// Position in `heap` plus one; 0 means absent.
    indices: Vec<u32>,
}

impl VarOrderHeap {
    pub fn new(num_vars: usize) -> VarOrderHeap {
        VarOrderHeap {
            heap: Vec::with_capacity(num_vars),
            indices: vec![0; num_vars],
        }
    }

    #[inline]
    fn before(activity: &[f64], a: Var, b: Var) -> bool {
        let (aa, ab) = (activity[a.index()], activity[b.index()]);
        aa > ab || (aa == ab && a.0 < b.0)
    }

    #[inline]
    pub fn in_heap(&self, v: Var) -> bool {
        self.indices[v.index()] != 0
    }

    #[allow(dead_code)]
    pub fn len(&self) -> usize {
        self.heap.len()
    }

    #[allow(dead_code)]
    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn peek(&self) -> Option<Var> {
        self.heap.first().copied()
    }

    pub fn clear(&mut self) {
        for &v in &self.heap {
            self.indices[v.index()] = 0;
        }
        self.heap.clear();
    }

    pub fn insert(&mut self, v: Var, activity: &[f64]) {
        if self.in_heap(v) {
            return;
        }
        self.heap.push(v);
        let idx = self.heap.len() - 1;
        self.indices[v.index()] = idx as u32 + 1;
        self.sift_up(idx, activity);
    }

    /// Restores the heap position of `v` after its activity changed.
    pub fn update(&mut self, v: Var, activity: &[f64]) {
        if !self.in_heap(v) {
            return;
        }
        let idx = (self.indices[v.index()] - 1) as usize;
        let idx = self.sift_up(idx, activity);
        self.sift_down(idx, activity);
    }

    pub fn pop_max(&mut self, activity: &[f64]) -> Option<Var> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.indices[top.index()] = 0;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.indices[last.index()] = 1;
            self.sift_down(0, activity);
        }
        Some(top)
    }

    pub fn rebuild(&mut self, vars: impl Iterator<Item = Var>, activity: &[f64]) {
        self.clear();
        for v in vars {
            self.heap.push(v);
            self.indices[v.index()] = self.heap.len() as u32;
        }
        for i in (0..self.heap.len() / 2).rev() {
            self.sift_down(i, activity);
        }
    }

    fn sift_up(&mut self, mut idx: usize, activity: &[f64]) -> usize {
        let v = self.heap[idx];
        while idx > 0 {
            let parent = (idx - 1) >> 1;
            if Self::before(activity, v, self.heap[parent]) {
                self.heap[idx] = self.heap[parent];
                self.indices[self.heap[idx].index()] = idx as u32 + 1;
                idx = parent;
            } else {
                break;
            }
        }
        self.heap[idx] = v;
        self.indices[v.index()] = idx as u32 + 1;
        idx
    }

    fn sift_down(&mut self, mut idx: usize, activity: &[f64]) {
        let v = self.heap[idx];
        loop {
            let left = 2 * idx + 1;
            if left >= self.heap.len() {
                break;
            }
            let right = left + 1;
            let child = if right < self.heap.len()
                && Self::before(activity, self.heap[right], self.heap[left])
            {
                right
            } else {
                left
            };
            if Self::before(activity, self.heap[child], v) {
                self.heap[idx] = self.heap[child];
                self.indices[self.heap[idx].index()] = idx as u32 + 1;
                idx = child;
            } else {
                break;
            }
        }
        self.heap[idx] = v;
        self.indices[v.index()] = idx as u32 + 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pops_in_activity_order_with_index_tie_break() {
        let activity = vec![5.0, 9.0, 9.0, 1.0];
        let mut heap = VarOrderHeap::new(4);
        for i in 0..4 {
            heap.insert(Var(i), &activity);
        }
        let order: Vec<u32> = std::iter::from_fn(|| heap.pop_max(&activity).map(|v| v.0)).collect();
        assert_eq!(order, vec![1, 2, 0, 3]);
    }

    #[test]
    fn update_restores_order_after_increase() {
        let mut activity = vec![1.0, 2.0, 3.0];
        let mut heap = VarOrderHeap::new(3);
        for i in 0..3 {
            heap.insert(Var(i), &activity);
        }
        activity[0] = 10.0;
        heap.update(Var(0), &activity);
        assert_eq!(heap.pop_max(&activity), Some(Var(0)));
        assert_eq!(heap.pop_max(&activity), Some(Var(2)));
        assert_eq!(heap.pop_max(&activity), Some(Var(1)));
        assert_eq!(heap.pop_max(&activity), None);
    }

    #[test]
    fn rebuild_contains_exactly_given_vars() {
        let activity = vec![1.0, 4.0, 2.0, 8.0];
        let mut heap = VarOrderHeap::new(4);
        heap.rebuild([Var(0), Var(2), Var(3)].into_iter(), &activity);
        assert!(heap.in_heap(Var(0)));
        assert!(!heap.in_heap(Var(1)));
        assert_eq!(heap.pop_max(&activity), Some(Var(3)));
        assert_eq!(heap.len(), 2);
    }
}
