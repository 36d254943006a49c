//! Probe accounting and the sector-traffic model.
//!
//! A probe is one read of a whole bucket, whatever its size. The sector model
//! converts mean probes into an estimate of 32-byte DRAM sectors touched per
//! key. It is a floor: it ignores cache hits, TLB traffic and replays.

use serde::{Deserialize, Serialize};

use crate::config::TableKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Insert,
    Find,
}

impl Op {
    pub fn name(self) -> &'static str {
        match self {
            Op::Insert => "insert",
            Op::Find => "find",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeStats {
    pub op: Op,
    pub total_probes: u64,
    pub total_ops: u64,
}

impl ProbeStats {
    pub fn new(op: Op) -> Self {
        ProbeStats { op, total_probes: 0, total_ops: 0 }
    }

    #[inline]
    pub fn record_probe(&mut self, count: u64) {
        self.total_probes += count;
    }

    /// Closes one operation that performed `probes` bucket reads.
    #[inline]
    pub fn record_op(&mut self, probes: u64) {
        self.total_probes += probes;
        self.total_ops += 1;
    }

    pub fn merge(&mut self, other: &ProbeStats) {
        debug_assert_eq!(self.op, other.op);
        self.total_probes += other.total_probes;
        self.total_ops += other.total_ops;
    }

    pub fn merged(mut self, other: &ProbeStats) -> Self {
        self.merge(other);
        self
    }

    pub fn mean(&self) -> f64 {
        if self.total_ops == 0 {
            0.0
        } else {
            self.total_probes as f64 / self.total_ops as f64
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorModel {
    pub sector_bytes: u32,
    pub pair_bytes: u32,
    /// Sectors added by the atomic write-back of an insertion.
    pub write_extra: u32,
    /// Minimum sectors moved between DRAM and L2 per uncoalesced read.
    pub min_read_sectors: u32,
}

impl Default for SectorModel {
    fn default() -> Self {
        SectorModel { sector_bytes: 32, pair_bytes: 8, write_extra: 1, min_read_sectors: 2 }
    }
}

impl SectorModel {
    /// `ceil(8b / 32)`.
    pub fn bucket_sectors(&self, bucket_size: usize) -> u32 {
        let bytes = bucket_size as u32 * self.pair_bytes;
        bytes.div_ceil(self.sector_bytes)
    }

    /// Sectors per probe. Single-slot buckets pay the 64-byte DRAM-to-L2 granularity.
    pub fn read_sectors(&self, kind: TableKind, bucket_size: usize) -> u32 {
        match kind {
            TableKind::OneCht => self.bucket_sectors(bucket_size).max(self.min_read_sectors),
            _ => self.bucket_sectors(bucket_size),
        }
    }
}

/// Expected sectors per key: `mean_probes * read_sectors`, plus the write-back
/// sector for insertions.
pub fn predict_sectors(model: &SectorModel, kind: TableKind, bucket_size: usize, mean_probes: f64, op: Op) -> f64 {
    let reads = mean_probes * model.read_sectors(kind, bucket_size) as f64;
    match op {
        Op::Find => reads,
        Op::Insert => reads + model.write_extra as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn means() {
        let mut s = ProbeStats::new(Op::Find);
        assert_eq!(s.mean(), 0.0);
        s.record_op(1);
        assert_eq!(s.mean(), 1.0);
        let mut t = ProbeStats::new(Op::Find);
        for p in [1, 2, 3] {
            t.record_op(p);
        }
        assert_eq!(t.mean(), 2.0);
        let m = s.merged(&t);
        assert_eq!((m.total_probes, m.total_ops), (7, 4));
    }

    #[test]
    fn record_probe_adds_without_op() {
        let mut s = ProbeStats::new(Op::Insert);
        s.record_probe(3);
        s.record_op(1);
        assert_eq!(s.mean(), 4.0);
    }

    #[test]
    fn bucket_sectors() {
        let m = SectorModel::default();
        assert_eq!(m.bucket_sectors(1), 1);
        assert_eq!(m.bucket_sectors(8), 2);
        assert_eq!(m.bucket_sectors(16), 4);
        assert_eq!(m.bucket_sectors(32), 8);
        assert_eq!(m.read_sectors(TableKind::OneCht, 1), 2);
        assert_eq!(m.read_sectors(TableKind::Bcht, 16), 4);
    }

    #[test]
    fn predictions() {
        let m = SectorModel::default();
        assert_eq!(predict_sectors(&m, TableKind::Bcht, 16, 1.0, Op::Find), 4.0);
        assert_eq!(predict_sectors(&m, TableKind::Bcht, 16, 3.0, Op::Find), 12.0);
        assert_eq!(predict_sectors(&m, TableKind::Bcht, 16, 1.0, Op::Insert), 5.0);
    }

    #[test]
    fn bp2ht_insert_costs_one_bucket_plus_writeback_over_best_case_find() {
        let m = SectorModel::default();
        let insert = predict_sectors(&m, TableKind::Bp2ht, 16, 2.0, Op::Insert);
        let find = predict_sectors(&m, TableKind::Bp2ht, 16, 1.0, Op::Find);
        assert_eq!(insert - find, m.bucket_sectors(16) as f64 + 1.0);
    }

    #[test]
    fn monotone_in_probes_and_bucket_size() {
        let m = SectorModel::default();
        for op in [Op::Find, Op::Insert] {
            let mut last = 0.0;
            for p in [1.0, 1.2, 1.5, 2.0, 2.8, 3.0] {
                let s = predict_sectors(&m, TableKind::Bcht, 16, p, op);
                assert!(s >= last);
                last = s;
            }
            let mut last = 0.0;
            for b in [1, 2, 4, 8, 16, 32, 64] {
                let s = predict_sectors(&m, TableKind::Bcht, b, 1.5, op);
                assert!(s >= last);
                last = s;
            }
        }
    }
}
