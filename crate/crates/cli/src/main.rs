fn main() { println!("entire"); }
