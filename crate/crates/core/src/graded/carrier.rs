use std::collections::HashSet;
use std::fmt;

use super::AlgebraError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

/// What a generator stands for relative to the coordinate it is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// `x_i` on a polynomial carrier, `xi_i` on an exterior one.
    Coordinate,
    /// The coordinate derivation `d/dx_i` or `d/dxi_i`.
    Vector,
    /// The one-form `dx_i` or `dxi_i`.
    Differential,
    /// The pairing dual `xi_i^*` (exterior carriers only).
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CarrierKind {
    Polynomial,
    Exterior,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub parity: Parity,
    pub homological_degree: i32,
    pub scaling_weight: i32,
    pub role: Role,
    /// Index of the underlying coordinate, `0..n`.
    pub index: usize,
    /// Multiplier of `lambda_index` in the modular weight of this generator.
    pub modular_sign: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CarrierSpec {
    kind: CarrierKind,
    coordinates: Vec<String>,
    generators: Vec<Generator>,
    roles: Vec<Role>,
}

impl CarrierSpec {
    /// `R[x_1..x_n]` with `d/dx_i` and `dx_i`, declared in that block order.
    pub fn polynomial<S: AsRef<str>>(names: &[S]) -> Result<Self, AlgebraError> {
        let table = [
            (Role::Coordinate, Parity::Even, 0, 1, 1),
            (Role::Vector, Parity::Odd, -1, -1, -1),
            (Role::Differential, Parity::Odd, 1, 1, 1),
        ];
        Self::build(CarrierKind::Polynomial, names, &table)
    }

    /// `Lambda(xi_1..xi_n)` with `d/dxi_i`, `dxi_i` and `xi_i^*`.
    pub fn exterior<S: AsRef<str>>(names: &[S]) -> Result<Self, AlgebraError> {
        let table = [
            (Role::Coordinate, Parity::Odd, -1, -1, -1),
            (Role::Vector, Parity::Even, 0, 1, 1),
            (Role::Differential, Parity::Even, 0, -1, -1),
            (Role::Dual, Parity::Odd, 1, 1, 1),
        ];
        Self::build(CarrierKind::Exterior, names, &table)
    }

    /// Default coordinate names `x1..xn` or `xi1..xin`.
    pub fn standard(kind: CarrierKind, n: usize) -> Self {
        let prefix = match kind {
            CarrierKind::Polynomial => "x",
            CarrierKind::Exterior => "xi",
        };
        let names: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        let built = match kind {
            CarrierKind::Polynomial => Self::polynomial(&names),
            CarrierKind::Exterior => Self::exterior(&names),
        };
        built.expect("standard names are distinct")
    }

    fn build<S: AsRef<str>>(
        kind: CarrierKind,
        names: &[S],
        table: &[(Role, Parity, i32, i32, i32)],
    ) -> Result<Self, AlgebraError> {
        let coordinates: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let mut generators = Vec::new();
        for &(role, parity, degree, weight, modular_sign) in table {
            for (index, name) in coordinates.iter().enumerate() {
                let name = match role {
                    Role::Coordinate => name.clone(),
                    Role::Vector => format!("d/d{name}"),
                    Role::Differential => format!("d{name}"),
                    Role::Dual => format!("{name}*"),
                };
                generators.push(Generator {
                    name,
                    parity,
                    homological_degree: degree,
                    scaling_weight: weight,
                    role,
                    index,
                    modular_sign,
                });
            }
        }
        let mut seen = HashSet::new();
        for g in &generators {
            if !seen.insert(g.name.as_str()) {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
        }
        let roles = table.iter().map(|t| t.0).collect();
        Ok(CarrierSpec {
            kind,
            coordinates,
            generators,
            roles,
        })
    }

    pub fn kind(&self) -> CarrierKind {
        self.kind
    }

    /// Number of coordinates.
    pub fn n(&self) -> usize {
        self.coordinates.len()
    }

    pub fn coordinate_names(&self) -> &[String] {
        &self.coordinates
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generator(&self, slot: usize) -> &Generator {
        &self.generators[slot]
    }

    pub fn has_role(&self, role: Role) -> bool {
        self.roles.contains(&role)
    }

    /// Slot of the generator with the given role attached to coordinate `i`.
    pub fn slot(&self, role: Role, i: usize) -> usize {
        let block = self
            .roles
            .iter()
            .position(|r| *r == role)
            .unwrap_or_else(|| panic!("{role:?} generators are not declared on this carrier"));
        assert!(i < self.n(), "coordinate index {i} out of range");
        block * self.n() + i
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn is_odd(&self, slot: usize) -> bool {
        self.generators[slot].parity == Parity::Odd
    }
}

impl fmt::Display for CarrierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
        write!(f, "{:?}[{}]", self.kind, names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_layout() {
        let c = CarrierSpec::standard(CarrierKind::Polynomial, 2);
        let names: Vec<_> = c.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["x1", "x2", "d/dx1", "d/dx2", "dx1", "dx2"]);
        assert_eq!(c.slot(Role::Differential, 1), 5);
        assert_eq!(c.generator(2).homological_degree, -1);
        assert!(!c.has_role(Role::Dual));
    }

    #[test]
    fn exterior_gradings() {
        let c = CarrierSpec::standard(CarrierKind::Exterior, 1);
        let g: Vec<_> = c
            .generators()
            .iter()
            .map(|g| (g.parity, g.homological_degree, g.scaling_weight))
            .collect();
        assert_eq!(
            g,
            [
                (Parity::Odd, -1, -1),
                (Parity::Even, 0, 1),
                (Parity::Even, 0, -1),
                (Parity::Odd, 1, 1)
            ]
        );
    }

    #[test]
    fn duplicate_names_rejected() {
        let err = CarrierSpec::polynomial(&["a", "a"]).unwrap_err();
        assert_eq!(err, AlgebraError::DuplicateGenerator("a".into()));
        // "da" as a coordinate collides with the one-form of "a"
        assert!(CarrierSpec::polynomial(&["a", "da"]).is_err());
    }
}
