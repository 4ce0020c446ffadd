pub mod aut;
pub mod glued;
pub mod lemmas;
pub mod punctured;
pub mod rank2;
pub mod rigid;
