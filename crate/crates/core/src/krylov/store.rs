use std::borrow::Cow;
use std::cell::RefCell;
use std::fs::File;
use std::io::{Read, Seek, SeekFrom, Write};

use crate::{Error, Result};

/// Fixed-size binary encoding used when a basis is spilled to disk.
pub trait Spill: Sized {
    fn byte_len(&self) -> usize;

    fn spill(&self, out: &mut Vec<u8>);

    /// Rebuilds a vector with the same shape as `template` from `bytes`.
    fn restore(template: &Self, bytes: &[u8]) -> Self;
}

/// Basis storage that starts in memory and moves to an anonymous temporary
/// file once the configured byte budget is exceeded.
#[derive(Debug)]
pub struct BasisStore<V> {
    memory: Vec<V>,
    disk: Option<DiskRecords<V>>,
    budget: Option<usize>,
}

#[derive(Debug)]
struct DiskRecords<V> {
    file: RefCell<File>,
    template: V,
    record_len: usize,
    len: usize,
}

impl<V: Clone + Spill> BasisStore<V> {
    pub fn new(budget: Option<usize>) -> Self {
        Self {
            memory: Vec::new(),
            disk: None,
            budget,
        }
    }

    pub fn len(&self) -> usize {
        match &self.disk {
            Some(d) => d.len,
            None => self.memory.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_spilled(&self) -> bool {
        self.disk.is_some()
    }

    pub fn push(&mut self, v: V) -> Result<()> {
        if let Some(disk) = &mut self.disk {
            return disk.append(&v);
        }
        let record = v.byte_len();
        let over_budget = self
            .budget
            .is_some_and(|b| (self.memory.len() + 1) * record > b);
        if !over_budget {
            self.memory.push(v);
            return Ok(());
        }
        log::info!(
            "basis exceeds memory budget at {} vectors; spilling to disk",
            self.memory.len() + 1
        );
        let mut disk = DiskRecords {
            file: RefCell::new(tempfile::tempfile()?),
            template: v.clone(),
            record_len: record,
            len: 0,
        };
        for old in self.memory.drain(..) {
            disk.append(&old)?;
        }
        disk.append(&v)?;
        self.disk = Some(disk);
        Ok(())
    }

    pub fn get_ref(&self, i: usize) -> Result<Cow<'_, V>> {
        let len = self.len();
        if i >= len {
            return Err(Error::IndexOutOfRange {
                requested: i,
                available: len,
            });
        }
        match &self.disk {
            None => Ok(Cow::Borrowed(&self.memory[i])),
            Some(d) => d.read(i).map(Cow::Owned),
        }
    }

    pub fn get(&self, i: usize) -> Result<V> {
        self.get_ref(i).map(Cow::into_owned)
    }
}

impl<V: Spill> DiskRecords<V> {
    fn append(&mut self, v: &V) -> Result<()> {
        let mut buf = Vec::with_capacity(self.record_len);
        v.spill(&mut buf);
        if buf.len() != self.record_len {
            return Err(Error::InvalidParameter(format!(
                "spilled vector has {} bytes, expected {}",
                buf.len(),
                self.record_len
            )));
        }
        let mut f = self.file.borrow_mut();
        f.seek(SeekFrom::Start((self.len * self.record_len) as u64))?;
        f.write_all(&buf)?;
        self.len += 1;
        Ok(())
    }

    fn read(&self, i: usize) -> Result<V> {
        let mut buf = vec![0u8; self.record_len];
        let mut f = self.file.borrow_mut();
        f.seek(SeekFrom::Start((i * self.record_len) as u64))?;
        f.read_exact(&mut buf)?;
        Ok(V::restore(&self.template, &buf))
    }
}

pub(crate) fn spill_f64s(values: impl Iterator<Item = f64>, out: &mut Vec<u8>) {
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

pub(crate) fn restore_f64s(bytes: &[u8]) -> impl Iterator<Item = f64> + '_ {
    bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
}

mod impls {
    use ndarray::{Array1, Array2};

    use super::{restore_f64s, spill_f64s, Spill};
    use crate::C64;

    fn restore_complex(bytes: &[u8]) -> Vec<C64> {
        let flat: Vec<f64> = restore_f64s(bytes).collect();
        flat.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect()
    }

    impl Spill for Vec<f64> {
        fn byte_len(&self) -> usize {
            self.len() * 8
        }
        fn spill(&self, out: &mut Vec<u8>) {
            spill_f64s(self.iter().copied(), out);
        }
        fn restore(_template: &Self, bytes: &[u8]) -> Self {
            restore_f64s(bytes).collect()
        }
    }

    impl Spill for Array1<C64> {
        fn byte_len(&self) -> usize {
            self.len() * 16
        }
        fn spill(&self, out: &mut Vec<u8>) {
            spill_f64s(self.iter().flat_map(|z| [z.re, z.im]), out);
        }
        fn restore(_template: &Self, bytes: &[u8]) -> Self {
            Array1::from(restore_complex(bytes))
        }
    }

    impl Spill for Array2<C64> {
        fn byte_len(&self) -> usize {
            self.len() * 16
        }
        fn spill(&self, out: &mut Vec<u8>) {
            spill_f64s(self.iter().flat_map(|z| [z.re, z.im]), out);
        }
        fn restore(template: &Self, bytes: &[u8]) -> Self {
            Array2::from_shape_vec(template.raw_dim(), restore_complex(bytes))
                .expect("spilled matrix matches template shape")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spills_past_budget_and_reads_back() {
        let mut store = BasisStore::new(Some(3 * 4 * 8));
        for i in 0..6 {
            store.push(vec![i as f64; 4]).unwrap();
        }
        assert!(store.is_spilled());
        assert_eq!(store.len(), 6);
        for i in 0..6 {
            assert_eq!(store.get(i).unwrap(), vec![i as f64; 4]);
        }
        assert!(matches!(
            store.get(6),
            Err(Error::IndexOutOfRange { requested: 6, .. })
        ));
    }

    #[test]
    fn unbounded_store_stays_in_memory() {
        let mut store = BasisStore::new(None);
        store.push(vec![1.0, 2.0]).unwrap();
        assert!(!store.is_spilled());
        assert_eq!(*store.get_ref(0).unwrap(), vec![1.0, 2.0]);
    }
}
