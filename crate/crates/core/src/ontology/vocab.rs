//! Fixed vocabulary: ontology classes with their subclass edges, properties, and
//! named individuals.
//!
//! Terms under [`ONTOLOGY_NS`] belong to the agent/blockchain ontology proper.
//! Terms under [`EXT_NS`] are the artifact's registered extension: behavior
//! structure, plan executions, activity roles and chain data properties.

use std::collections::{BTreeSet, HashMap};
use std::sync::LazyLock;

use super::Iri;

pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
pub const ONTOLOGY_NS: &str = "urn:oasis-eth:ontology#";
pub const EXT_NS: &str = "urn:oasis-eth:ext#";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ns {
    Rdf,
    Owl,
    Ontology,
    Ext,
}

impl Ns {
    pub fn uri(self) -> &'static str {
        match self {
            Ns::Rdf => RDF_NS,
            Ns::Owl => OWL_NS,
            Ns::Ontology => ONTOLOGY_NS,
            Ns::Ext => EXT_NS,
        }
    }
}

macro_rules! vocabulary_enum {
    (
        $(#[$meta:meta])*
        $name:ident { $( $variant:ident => ($ns:ident, $local:literal) ),* $(,)? }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name { $($variant),* }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),*];

            pub fn local_name(self) -> &'static str {
                match self { $($name::$variant => $local),* }
            }

            pub fn ns(self) -> Ns {
                match self { $($name::$variant => Ns::$ns),* }
            }

            pub fn iri(self) -> Iri {
                static IRIS: LazyLock<Vec<Iri>> = LazyLock::new(|| {
                    $name::ALL
                        .iter()
                        .map(|t| Iri::new(t.ns().uri(), t.local_name()).expect("vocabulary IRI"))
                        .collect()
                });
                IRIS[self as usize].clone()
            }

            pub fn from_iri(iri: &Iri) -> Option<$name> {
                static INDEX: LazyLock<HashMap<String, $name>> = LazyLock::new(|| {
                    $name::ALL.iter().map(|t| (t.iri().as_str().to_string(), *t)).collect()
                });
                INDEX.get(iri.as_str()).copied()
            }
        }
    };
}

vocabulary_enum! {
    /// Every class the store knows about.
    Class {
        BlockchainBlock => (Ontology, "BlockchainBlock"),
        EthereumBlock => (Ontology, "EthereumBlock"),
        BlockchainTransaction => (Ontology, "BlockchainTransaction"),
        EthereumTransaction => (Ontology, "EthereumTransaction"),
        Agent => (Ontology, "Agent"),
        BlockchainNode => (Ontology, "BlockchainNode"),
        EthereumNode => (Ontology, "EthereumNode"),
        System => (Ontology, "System"),
        EthereumSystem => (Ontology, "EthereumSystem"),
        BlockchainSmartContractCreation => (Ontology, "BlockchainSmartContractCreation"),
        EthereumSmartContractCreation => (Ontology, "EthereumSmartContractCreation"),
        BlockchainSmartContractInteraction => (Ontology, "BlockchainSmartContractInteraction"),
        EthereumSmartContractInteraction => (Ontology, "EthereumSmartContractInteraction"),
        BlockchainSmartContractAgent => (Ontology, "BlockchainSmartContractAgent"),
        BlockchainAccount => (Ontology, "BlockchainAccount"),
        BlockchainSmartContractAccount => (Ontology, "BlockchainSmartContractAccount"),
        EthereumSmartContractAccount => (Ontology, "EthereumSmartContractAccount"),
        EoaBlockchainAccount => (Ontology, "EOA-BlockchainAccount"),
        EoaEthereumAccount => (Ontology, "EOA-EthereumAccount"),
        NonFungibleBlockchainSmartContractAgent => (Ontology, "NonFungibleBlockchainSmartContractAgent"),
        EthereumErc721SmartContractAgent => (Ontology, "EthereumERC721SmartContractAgent"),
        FungibleBlockchainSmartContractAgent => (Ontology, "FungibleBlockchainSmartContractAgent"),
        EthereumErc20SmartContractAgent => (Ontology, "EthereumERC20SmartContractAgent"),
        CryptocurrencyExchangeBlockchainSmartContractAgent => (Ontology, "CryptocurrencyExchangeBlockchainSmartContractAgent"),
        EtherExchangeSmartContractAgent => (Ontology, "EtherExchangeSmartContractAgent"),
        GeneralPurposeBlockchainSmartContractAgent => (Ontology, "GeneralPurposeBlockchainSmartContractAgent"),
        SmartContractInteraction => (Ontology, "SmartContractInteraction"),
        EthereumContractInteraction => (Ontology, "EthereumContractInteraction"),
        CryptocurrencyExchangeBlockchainSmartContractInteraction => (Ontology, "CryptocurrencyExchangeBlockchainSmartContractInteraction"),
        EtherExchangeSmartContractInteraction => (Ontology, "EtherExchangeSmartContractInteraction"),
        Action => (Ontology, "Action"),
        ReferenceTemplate => (Ontology, "ReferenceTemplate"),
        EthereumToken => (Ontology, "EthereumToken"),
        EthereumNonFungibleToken => (Ontology, "EthereumNonFungibleToken"),
        EthereumTokenErc721 => (Ontology, "EthereumTokenERC721"),
        EthereumFungibleToken => (Ontology, "EthereumFungibleToken"),
        EthereumTokenErc20 => (Ontology, "EthereumTokenERC20"),
        EthereumSemiFungibleToken => (Ontology, "EthereumSemiFungibleToken"),
        EthereumTokenErc1155 => (Ontology, "EthereumTokenERC1155"),
        EthereumCustomToken => (Ontology, "EthereumCustomToken"),
        BurnedEthereumToken => (Ontology, "BurnedEthereumToken"),
        EndurantFeature => (Ontology, "EndurantFeature"),
        EthereumTokenEndurantFeatures => (Ontology, "EthereumTokenEndurantFeatures"),
        EthereumWalletOwnerEndurantFeature => (Ontology, "EthereumWalletOwnerEndurantFeature"),
        DeprecatedEthereumTokenEndurantFeature => (Ontology, "DeprecatedEthereumTokenEndurantFeature"),
        EthereumTokenFeatureModificationActivity => (Ontology, "EthereumTokenFeatureModificationActivity"),
        TransferActivity => (Ontology, "TransferActivity"),
        DelegationActivity => (Ontology, "DelegationActivity"),
        Behavior => (Ext, "Behavior"),
        BehaviorTemplate => (Ext, "BehaviorTemplate"),
        Goal => (Ext, "Goal"),
        TaskDescription => (Ext, "TaskDescription"),
        TaskReference => (Ext, "TaskReference"),
        Conditional => (Ext, "Conditional"),
        ActivityPattern => (Ext, "ActivityPattern"),
        RoleConstraint => (Ext, "RoleConstraint"),
        PropertyConstraint => (Ext, "PropertyConstraint"),
        PlanExecution => (Ext, "PlanExecution"),
        DelegationScope => (Ext, "DelegationScope"),
    }
}

vocabulary_enum! {
    Property {
        Type => (Rdf, "type"),
        SameAs => (Owl, "sameAs"),
        Embeds => (Ontology, "embeds"),
        Mines => (Ontology, "mines"),
        Constitutes => (Ontology, "constitutes"),
        Describes => (Ontology, "describes"),
        AssociatedWith => (Ontology, "associatedWith"),
        RefersExactlyTo => (Ontology, "refersExactlyTo"),
        RefersAsNewTo => (Ontology, "refersAsNewTo"),
        HasEthereumTokenEndurantFeature => (Ontology, "hasEthereumTokenEndurantFeature"),
        IsInTheWalletOf => (Ontology, "isInTheWalletOf"),
        HasEthereumTokenFeatureModificationSource => (Ontology, "hasEthereumTokenFeatureModificationSource"),
        HasEthereumTokenFeatureModificationResult => (Ontology, "hasEthereumTokenFeatureModificationResult"),
        IsEthereumTokenFeatureModifiedIn => (Ontology, "isEthereumTokenFeatureModifiedIn"),
        HasSpecificity => (Ontology, "hasSpecificity"),
        // chain data
        HasBlockNumber => (Ext, "hasBlockNumber"),
        HasHash => (Ext, "hasHash"),
        HasTimestamp => (Ext, "hasTimestamp"),
        HasTransactionIndex => (Ext, "hasTransactionIndex"),
        HasValue => (Ext, "hasValue"),
        HasSender => (Ext, "hasSender"),
        HasRecipient => (Ext, "hasRecipient"),
        HasStatus => (Ext, "hasStatus"),
        HasSelector => (Ext, "hasSelector"),
        HasAddress => (Ext, "hasAddress"),
        HasTokenId => (Ext, "hasTokenId"),
        HasContractAddress => (Ext, "hasContractAddress"),
        IsManagedBy => (Ext, "isManagedBy"),
        HasTransactionHash => (Ext, "hasTransactionHash"),
        HasLogIndex => (Ext, "hasLogIndex"),
        HasSequence => (Ext, "hasSequence"),
        // behavior structure
        HasBehavior => (Ext, "hasBehavior"),
        ImplementsTemplate => (Ext, "implementsTemplate"),
        HasGoal => (Ext, "hasGoal"),
        HasTask => (Ext, "hasTask"),
        HasOperator => (Ext, "hasOperator"),
        HasOperatorArgument => (Ext, "hasOperatorArgument"),
        HasObject => (Ext, "hasObject"),
        HasInputParameter => (Ext, "hasInputParameter"),
        HasOutputParameter => (Ext, "hasOutputParameter"),
        HasPosition => (Ext, "hasPosition"),
        RequiresClass => (Ext, "requiresClass"),
        HasPropertyConstraint => (Ext, "hasPropertyConstraint"),
        ConstraintProperty => (Ext, "constraintProperty"),
        ConstraintValue => (Ext, "constraintValue"),
        HasConditional => (Ext, "hasConditional"),
        HasConditionalOperator => (Ext, "hasConditionalOperator"),
        HasConditionalObject => (Ext, "hasConditionalObject"),
        HasConditionTiming => (Ext, "hasConditionTiming"),
        HasRoleConstraint => (Ext, "hasRoleConstraint"),
        ConstraintPath => (Ext, "constraintPath"),
        ExcludesClass => (Ext, "excludesClass"),
        // activities
        HasTransferSource => (Ext, "hasTransferSource"),
        HasTransferDestination => (Ext, "hasTransferDestination"),
        HasTransferObject => (Ext, "hasTransferObject"),
        HasDelegationSubject => (Ext, "hasDelegationSubject"),
        HasDelegationObject => (Ext, "hasDelegationObject"),
        HasDelegationProperty => (Ext, "hasDelegationProperty"),
        HasDelegator => (Ext, "hasDelegator"),
        IsRevokedAt => (Ext, "isRevokedAt"),
        IntroducedBy => (Ext, "introducedBy"),
        // plan executions
        ExecutesTask => (Ext, "executesTask"),
        IsPlanExecutionOf => (Ext, "isPlanExecutionOf"),
        BindsObject => (Ext, "bindsObject"),
        BindsInput1 => (Ext, "bindsInput1"),
        BindsInput2 => (Ext, "bindsInput2"),
        BindsInput3 => (Ext, "bindsInput3"),
        BindsOutput1 => (Ext, "bindsOutput1"),
    }
}

vocabulary_enum! {
    Individual {
        Mint => (Ontology, "mint"),
        Burn => (Ontology, "burn"),
        Transfer => (Ontology, "transfer"),
        Delegate => (Ontology, "delegate"),
        Ownership => (Ontology, "ownership"),
        Exist => (Ontology, "exist"),
        Any => (Ontology, "any"),
        BlockchainDigitalToken => (Ontology, "blockchain_digital_token"),
        Retrieve => (Ext, "retrieve"),
    }
}

impl Class {
    /// Direct superclasses.
    pub fn parents(self) -> &'static [Class] {
        use Class::*;
        match self {
            EthereumBlock => &[BlockchainBlock],
            EthereumTransaction => &[BlockchainTransaction],
            BlockchainNode => &[Agent],
            EthereumNode => &[BlockchainNode],
            EthereumSystem => &[System],
            EthereumSmartContractCreation => &[BlockchainSmartContractCreation],
            EthereumSmartContractInteraction => &[BlockchainSmartContractInteraction],
            BlockchainSmartContractAgent => &[Agent],
            BlockchainSmartContractAccount => &[BlockchainAccount],
            EthereumSmartContractAccount => &[BlockchainSmartContractAccount],
            EoaBlockchainAccount => &[BlockchainAccount],
            EoaEthereumAccount => &[EoaBlockchainAccount],
            NonFungibleBlockchainSmartContractAgent => &[BlockchainSmartContractAgent],
            EthereumErc721SmartContractAgent => &[NonFungibleBlockchainSmartContractAgent],
            FungibleBlockchainSmartContractAgent => &[BlockchainSmartContractAgent],
            EthereumErc20SmartContractAgent => &[FungibleBlockchainSmartContractAgent],
            CryptocurrencyExchangeBlockchainSmartContractAgent => &[BlockchainSmartContractAgent],
            EtherExchangeSmartContractAgent => &[CryptocurrencyExchangeBlockchainSmartContractAgent],
            GeneralPurposeBlockchainSmartContractAgent => &[BlockchainSmartContractAgent],
            EthereumContractInteraction => &[SmartContractInteraction],
            CryptocurrencyExchangeBlockchainSmartContractInteraction => {
                &[BlockchainSmartContractInteraction]
            }
            EtherExchangeSmartContractInteraction => &[
                EthereumContractInteraction,
                CryptocurrencyExchangeBlockchainSmartContractInteraction,
            ],
            EthereumNonFungibleToken | EthereumFungibleToken | EthereumSemiFungibleToken
            | EthereumCustomToken | BurnedEthereumToken => &[EthereumToken],
            EthereumTokenErc721 => &[EthereumNonFungibleToken],
            EthereumTokenErc20 => &[EthereumFungibleToken],
            EthereumTokenErc1155 => &[EthereumSemiFungibleToken],
            EthereumTokenEndurantFeatures => &[EndurantFeature],
            EthereumWalletOwnerEndurantFeature | DeprecatedEthereumTokenEndurantFeature => {
                &[EthereumTokenEndurantFeatures]
            }
            _ => &[],
        }
    }

    /// The class itself plus every transitive superclass.
    pub fn ancestors(self) -> &'static BTreeSet<Class> {
        static TABLE: LazyLock<Vec<BTreeSet<Class>>> = LazyLock::new(|| {
            Class::ALL
                .iter()
                .map(|&c| {
                    let mut seen = BTreeSet::new();
                    let mut stack = vec![c];
                    while let Some(next) = stack.pop() {
                        if seen.insert(next) {
                            stack.extend_from_slice(next.parents());
                        }
                    }
                    seen
                })
                .collect()
        });
        &TABLE[self as usize]
    }

    /// The class itself plus every transitive subclass.
    pub fn descendants(self) -> &'static BTreeSet<Class> {
        static TABLE: LazyLock<Vec<BTreeSet<Class>>> = LazyLock::new(|| {
            Class::ALL
                .iter()
                .map(|&c| {
                    Class::ALL
                        .iter()
                        .copied()
                        .filter(|d| d.ancestors().contains(&c))
                        .collect()
                })
                .collect()
        });
        &TABLE[self as usize]
    }

    pub fn is_subclass_of(self, other: Class) -> bool {
        self.ancestors().contains(&other)
    }

    /// Looks a class up by full IRI or by local name.
    pub fn lookup(name: &str) -> Option<Class> {
        Class::ALL
            .iter()
            .copied()
            .find(|c| c.local_name() == name || c.iri().as_str() == name)
    }
}

impl Individual {
    pub fn lookup(name: &str) -> Option<Individual> {
        Individual::ALL
            .iter()
            .copied()
            .find(|i| i.local_name() == name || i.iri().as_str() == name)
    }

    /// Class membership asserted whenever the individual is written to a graph.
    pub fn class(self) -> Option<Class> {
        match self {
            Individual::Mint
            | Individual::Burn
            | Individual::Transfer
            | Individual::Delegate
            | Individual::Retrieve => Some(Class::Action),
            _ => None,
        }
    }
}

impl Property {
    pub fn lookup(name: &str) -> Option<Property> {
        Property::ALL
            .iter()
            .copied()
            .find(|p| p.local_name() == name || p.iri().as_str() == name)
    }
}
