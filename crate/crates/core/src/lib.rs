pub mod can;
pub mod control;
pub mod follower;
pub mod injection;
pub mod plant;
pub mod revtools;
pub mod serial;
pub mod sim;
