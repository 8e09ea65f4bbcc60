use markovlab::verify::Verifier;

fn main() {
    let verifier = Verifier::new(None);
    let results = verifier.run_all(|r| println!("{}", r.line()));
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
