fn main() {
    println!("ccr");
}
