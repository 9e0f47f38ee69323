use super::PolicyParameters;
use crate::money::Mkd;

/// Net monthly wage after social contributions and personal income tax.
///
/// Contributions are levied on the gross wage and tax on the wage net of
/// contributions, each rounded to whole MKD. Informal wages bypass the
/// wedge entirely.
pub fn gross_to_net(gross: Mkd, informal: bool, params: &PolicyParameters) -> Mkd {
    if informal || gross <= 0 {
        return gross.max(0);
    }
    let ssc = params.ssc_rate.mul_money(gross);
    let pit = params.pit_rate.mul_money(gross - ssc);
    gross - ssc - pit
}
