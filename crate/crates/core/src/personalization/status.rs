use std::fmt;

/// User registration status, totally ordered from `Anonymous` up to
/// `Administrator`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum RegistrationStatus {
    #[default]
    Anonymous,
    Reader,
    /// Also covers privileged portal users.
    Editor,
    Administrator,
}

impl RegistrationStatus {
    pub const ALL: [RegistrationStatus; 4] = [
        RegistrationStatus::Anonymous,
        RegistrationStatus::Reader,
        RegistrationStatus::Editor,
        RegistrationStatus::Administrator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RegistrationStatus::Anonymous => "anonymous",
            RegistrationStatus::Reader => "reader",
            RegistrationStatus::Editor => "editor",
            RegistrationStatus::Administrator => "administrator",
        }
    }

    pub fn from_name(name: &str) -> Option<RegistrationStatus> {
        RegistrationStatus::ALL.into_iter().find(|s| s.name() == name)
    }
}

impl fmt::Display for RegistrationStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
