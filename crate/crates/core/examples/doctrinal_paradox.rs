//! The doctrinal paradox: issue-wise majority over three rational
//! judgments produces an irrational collective judgment.

use iterative_ja::formula::Framework;
use iterative_ja::judgment::Profile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fw = Framework::parse(include_str!("data/doctrinal.txt"))?;
    print!("{}", fw.to_text());

    let models = fw.models()?;
    let names: Vec<String> = models.iter().map(ToString::to_string).collect();
    println!("rational judgments: {}", names.join(" "));

    let profile = Profile::load(include_str!("data/dp.txt"), fw.agenda.len(), &fw.constraint)?;
    println!("profile: {profile}");
    let majority = profile.majority_judgment()?;
    println!(
        "issue-wise majority: {majority} (rational: {})",
        fw.is_rational(&majority)
    );
    Ok(())
}
