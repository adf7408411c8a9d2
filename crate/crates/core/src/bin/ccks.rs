fn main() {
    println!("ccks");
}
