use std::collections::BTreeMap;

use crate::cremona::{multidegree_of, Multidegree};
use crate::error::{Error, Result};
use crate::filters::{
    adjunction_case_system, cremona_all_filters, cremona_degree_filters, d2_positive_filter, hodge_propagation_filter,
    lebarz_nu_bound, livorni_sommese_filters, log_general_filters, AdjunctionCase, Filter,
};
use crate::invariants::{reduction_table, solve_invariants, InvariantTable, ReductionTable, TransformationConfig};

/// Every filter a pipeline over one configuration can reference, by name.
///
/// Single filters are registered under their own names; groups under
/// `liso`, `cremona`, `cremona-all`, `log-general`, `case:<case>` (on the
/// reduction) and `base-case:<case>` (on the base threefold, filters renamed
/// `base.<name>`).
#[derive(Debug, Clone)]
pub struct FilterBank {
    cfg: TransformationConfig,
    table: InvariantTable,
    reduction: ReductionTable,
    multidegree: Multidegree,
    entries: BTreeMap<String, Vec<Filter>>,
}

impl FilterBank {
    pub fn new(cfg: &TransformationConfig, d2_threshold: i64) -> Result<Self> {
        let table = solve_invariants(cfg)?;
        let threefold = table.threefold()?.clone();
        let reduction = reduction_table(&threefold, true)?;
        let multidegree = multidegree_of(cfg, &table)?;
        let mut bank = FilterBank {
            cfg: *cfg,
            table,
            reduction,
            multidegree,
            entries: BTreeMap::new(),
        };

        let liso = livorni_sommese_filters(&bank.table)?;
        bank.add_group("liso", liso)?;
        let cremona = cremona_degree_filters(&bank.multidegree)?;
        bank.add_group("cremona", cremona)?;
        // Overlaps with `cremona` by name, so only the group is registered.
        let all = cremona_all_filters(&bank.multidegree)?;
        bank.insert("cremona-all", all)?;
        let lebarz = lebarz_nu_bound(&bank.table)?;
        bank.add_single(lebarz)?;
        let lg = log_general_filters(&bank.reduction, d2_threshold)?;
        bank.add_group("log-general", lg)?;
        let hp = hodge_propagation_filter(&bank.reduction)?;
        bank.add_single(hp)?;
        let d2 = d2_positive_filter(&bank.reduction)?;
        bank.add_single(d2)?;
        for case in AdjunctionCase::ALL {
            let on_reduction = adjunction_case_system(case, bank.reduction.table())?;
            bank.add_group(&format!("case:{case}"), on_reduction)?;
            let on_base: Vec<Filter> = adjunction_case_system(case, &threefold)?
                .into_iter()
                .map(|mut f| {
                    f.name = format!("base.{}", f.name);
                    f
                })
                .collect();
            bank.add_group(&format!("base-case:{case}"), on_base)?;
        }
        Ok(bank)
    }

    fn insert(&mut self, name: &str, filters: Vec<Filter>) -> Result<()> {
        if self.entries.contains_key(name) {
            return Err(Error::InvalidConfig(format!("filter name {name:?} is already taken")));
        }
        self.entries.insert(name.to_string(), filters);
        Ok(())
    }

    fn add_single(&mut self, f: Filter) -> Result<()> {
        let name = f.name.clone();
        self.insert(&name, vec![f])
    }

    fn add_group(&mut self, group: &str, filters: Vec<Filter>) -> Result<()> {
        for f in &filters {
            if f.name != group {
                self.add_single(f.clone())?;
            }
        }
        self.insert(group, filters)
    }

    /// Register a user-defined filter.
    pub fn add_custom(&mut self, f: Filter) -> Result<()> {
        self.add_single(f)
    }

    /// The filters a name refers to: a single filter or a group.
    pub fn resolve(&self, name: &str) -> Result<&[Filter]> {
        self.entries
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown filter or filter group {name:?}")))
    }

    /// Resolve a list of names into one flat list, dropping repeats.
    pub fn resolve_all(&self, names: &[String]) -> Result<Vec<Filter>> {
        let mut out: Vec<Filter> = Vec::new();
        for name in names {
            for f in self.resolve(name)? {
                if !out.iter().any(|g| g.name == f.name) {
                    out.push(f.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn config(&self) -> &TransformationConfig {
        &self.cfg
    }

    /// Invariant table of the base locus.
    pub fn table(&self) -> &InvariantTable {
        &self.table
    }

    /// The threefold the numerical filters act on.
    pub fn threefold(&self) -> &InvariantTable {
        self.table.threefold().expect("checked at construction")
    }

    /// Reduction table of [`FilterBank::threefold`].
    pub fn reduction(&self) -> &ReductionTable {
        &self.reduction
    }

    pub fn multidegree(&self) -> &Multidegree {
        &self.multidegree
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_and_singles_resolve() {
        let bank = FilterBank::new(&TransformationConfig::cubic_p6(), 3).unwrap();
        assert_eq!(bank.resolve("liso").unwrap().len(), 4);
        assert_eq!(bank.resolve("liso.2").unwrap().len(), 1);
        assert_eq!(bank.resolve("cremona").unwrap().len(), 5);
        assert_eq!(bank.resolve("lebarz").unwrap().len(), 1);
        assert_eq!(bank.resolve("case:mukai").unwrap().len(), 3);
        assert_eq!(
            bank.resolve("base-case:scroll-over-curve").unwrap()[0].name,
            "base.scroll-over-curve"
        );
        assert!(bank.resolve("nope").is_err());
        let flat = bank.resolve_all(&["liso".to_string(), "liso.1".to_string()]).unwrap();
        assert_eq!(flat.len(), 4);
    }

    #[test]
    fn custom_names_must_be_fresh() {
        let mut bank = FilterBank::new(&TransformationConfig::cubic_p6(), 3).unwrap();
        let f = Filter::non_negative("liso.1", crate::exactq::Polynomial::one(), "");
        assert!(bank.add_custom(f).is_err());
    }
}
