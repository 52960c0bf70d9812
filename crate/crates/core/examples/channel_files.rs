//! Writes a state and a channel to JSON, reads them back, and shows the error
//! an incomplete channel produces on load.

use skewchain::example::{example_channels, rho_theta};
use skewchain::io::{channel_to_json, parse_channel, parse_state, state_to_json};
use skewchain::quantum::GENERATED_TOL;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let state = rho_theta(0.8)?;
    let (n1, _) = example_channels(0.4, 0.0)?;

    let state_json = state_to_json(&state);
    let channel_json = channel_to_json(&n1);
    println!("state document: {} bytes, channel document: {} bytes", state_json.len(), channel_json.len());

    let back = parse_state(&state_json, GENERATED_TOL)?;
    println!("state round trip exact: {}", back.rho() == state.rho());
    let ch = parse_channel(&channel_json, GENERATED_TOL)?;
    println!("channel: {} Kraus operators, convention {:?}", ch.len(), ch.convention());

    let broken = r#"{"dim": 2, "kraus": [[[[1,0],[0,0]],[[0,0],[0.5,0]]]], "convention": "column_sum"}"#;
    match parse_channel(broken, GENERATED_TOL) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
