//! Exact character theory: cyclotomic numbers, character tables, class
//! functions, induction and restriction, and the homology character of a
//! realized group action.

mod character;
mod cyclotomic;
mod table;

pub use character::{
    action_character, character_of, cyclic_multiplicities, induce, inner, multiplicities,
    perm_character, rational_lattice_check, restrict_cf, ClassFunction, MultiplicityVector,
};
pub use cyclotomic::{cyclotomic_poly, euler_phi, Cyclotomic};
pub use table::{CharacterTable, TableJson};
