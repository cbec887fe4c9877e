//! Descent obstructions for finite group actions on torsors and gerbes over
//! finite poset sites, with the low-degree exact sequence realized as
//! explicit cochain chases.

pub mod abgroup;
pub mod chaincx;
pub mod gcoh;
pub mod possite;
pub mod descent;
pub mod fixtures;
pub mod lowdeg;
