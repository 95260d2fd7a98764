//! Standard data dictionary subset: identity and descriptor attributes named by
//! the deidentification action table, attributes the pipeline reads, and the
//! curve/overlay repeating groups.

use crate::codec::VR::{self, *};

pub(crate) struct Row {
    pub tag: u32,
    pub keyword: &'static str,
    pub vrs: &'static [VR],
    pub vm: &'static str,
}

macro_rules! rows {
    ($( $tag:literal $kw:ident [$($vr:ident)|+] $vm:literal ;)*) => {
        &[ $( Row { tag: $tag, keyword: stringify!($kw), vrs: &[$($vr),+], vm: $vm } ),* ]
    };
}

/// Exact entries, sorted by tag.
pub(crate) static EXACT: &[Row] = rows! {
    0x00020000 FileMetaInformationGroupLength [UL] "1";
    0x00020001 FileMetaInformationVersion [OB] "1";
    0x00020002 MediaStorageSOPClassUID [UI] "1";
    0x00020003 MediaStorageSOPInstanceUID [UI] "1";
    0x00020010 TransferSyntaxUID [UI] "1";
    0x00020012 ImplementationClassUID [UI] "1";
    0x00020013 ImplementationVersionName [SH] "1";
    0x00020016 SourceApplicationEntityTitle [AE] "1";
    0x00020017 SendingApplicationEntityTitle [AE] "1";
    0x00020018 ReceivingApplicationEntityTitle [AE] "1";
    0x00020100 PrivateInformationCreatorUID [UI] "1";
    0x00020102 PrivateInformation [OB] "1";
    0x00080005 SpecificCharacterSet [CS] "1-n";
    0x00080008 ImageType [CS] "2-n";
    0x00080012 InstanceCreationDate [DA] "1";
    0x00080013 InstanceCreationTime [TM] "1";
    0x00080014 InstanceCreatorUID [UI] "1";
    0x00080015 InstanceCoercionDateTime [DT] "1";
    0x00080016 SOPClassUID [UI] "1";
    0x00080018 SOPInstanceUID [UI] "1";
    0x00080020 StudyDate [DA] "1";
    0x00080021 SeriesDate [DA] "1";
    0x00080022 AcquisitionDate [DA] "1";
    0x00080023 ContentDate [DA] "1";
    0x00080024 OverlayDate [DA] "1";
    0x00080025 CurveDate [DA] "1";
    0x0008002A AcquisitionDateTime [DT] "1";
    0x00080030 StudyTime [TM] "1";
    0x00080031 SeriesTime [TM] "1";
    0x00080032 AcquisitionTime [TM] "1";
    0x00080033 ContentTime [TM] "1";
    0x00080034 OverlayTime [TM] "1";
    0x00080035 CurveTime [TM] "1";
    0x00080050 AccessionNumber [SH] "1";
    0x00080054 RetrieveAETitle [AE] "1-n";
    0x00080055 StationAETitle [AE] "1";
    0x00080058 FailedSOPInstanceUIDList [UI] "1-n";
    0x00080060 Modality [CS] "1";
    0x00080064 ConversionType [CS] "1";
    0x00080070 Manufacturer [LO] "1";
    0x00080080 InstitutionName [LO] "1";
    0x00080081 InstitutionAddress [ST] "1";
    0x00080082 InstitutionCodeSequence [SQ] "1";
    0x00080090 ReferringPhysicianName [PN] "1";
    0x00080092 ReferringPhysicianAddress [ST] "1";
    0x00080094 ReferringPhysicianTelephoneNumbers [SH] "1-n";
    0x00080096 ReferringPhysicianIdentificationSequence [SQ] "1";
    0x0008009C ConsultingPhysicianName [PN] "1-n";
    0x0008009D ConsultingPhysicianIdentificationSequence [SQ] "1";
    0x00080100 CodeValue [SH] "1";
    0x00080102 CodingSchemeDesignator [SH] "1";
    0x00080103 CodingSchemeVersion [SH] "1";
    0x00080104 CodeMeaning [LO] "1";
    0x0008010D ContextGroupExtensionCreatorUID [UI] "1";
    0x00080201 TimezoneOffsetFromUTC [SH] "1";
    0x00081010 StationName [SH] "1";
    0x00081030 StudyDescription [LO] "1";
    0x00081032 ProcedureCodeSequence [SQ] "1";
    0x0008103E SeriesDescription [LO] "1";
    0x00081040 InstitutionalDepartmentName [LO] "1";
    0x00081041 InstitutionalDepartmentTypeCodeSequence [SQ] "1";
    0x00081048 PhysiciansOfRecord [PN] "1-n";
    0x00081049 PhysiciansOfRecordIdentificationSequence [SQ] "1";
    0x00081050 PerformingPhysicianName [PN] "1-n";
    0x00081052 PerformingPhysicianIdentificationSequence [SQ] "1";
    0x00081060 NameOfPhysiciansReadingStudy [PN] "1-n";
    0x00081062 PhysiciansReadingStudyIdentificationSequence [SQ] "1";
    0x00081070 OperatorsName [PN] "1-n";
    0x00081072 OperatorIdentificationSequence [SQ] "1";
    0x00081080 AdmittingDiagnosesDescription [LO] "1-n";
    0x00081084 AdmittingDiagnosesCodeSequence [SQ] "1";
    0x00081090 ManufacturerModelName [LO] "1";
    0x00081110 ReferencedStudySequence [SQ] "1";
    0x00081111 ReferencedPerformedProcedureStepSequence [SQ] "1";
    0x00081115 ReferencedSeriesSequence [SQ] "1";
    0x00081120 ReferencedPatientSequence [SQ] "1";
    0x00081140 ReferencedImageSequence [SQ] "1";
    0x0008114A ReferencedInstanceSequence [SQ] "1";
    0x00081150 ReferencedSOPClassUID [UI] "1";
    0x00081155 ReferencedSOPInstanceUID [UI] "1";
    0x00081195 TransactionUID [UI] "1";
    0x00082111 DerivationDescription [ST] "1";
    0x00082112 SourceImageSequence [SQ] "1";
    0x00083010 IrradiationEventUID [UI] "1-n";
    0x00084000 IdentifyingComments [LT] "1";
    0x00089123 CreatorVersionUID [UI] "1";
    0x00089124 DerivationImageSequence [SQ] "1";
    0x00100010 PatientName [PN] "1";
    0x00100020 PatientID [LO] "1";
    0x00100021 IssuerOfPatientID [LO] "1";
    0x00100030 PatientBirthDate [DA] "1";
    0x00100032 PatientBirthTime [TM] "1";
    0x00100040 PatientSex [CS] "1";
    0x00100050 PatientInsurancePlanCodeSequence [SQ] "1";
    0x00100101 PatientPrimaryLanguageCodeSequence [SQ] "1";
    0x00100102 PatientPrimaryLanguageModifierCodeSequence [SQ] "1";
    0x00101000 OtherPatientIDs [LO] "1-n";
    0x00101001 OtherPatientNames [PN] "1-n";
    0x00101002 OtherPatientIDsSequence [SQ] "1";
    0x00101005 PatientBirthName [PN] "1";
    0x00101010 PatientAge [AS] "1";
    0x00101020 PatientSize [DS] "1";
    0x00101030 PatientWeight [DS] "1";
    0x00101040 PatientAddress [LO] "1";
    0x00101050 InsurancePlanIdentification [LO] "1-n";
    0x00101060 PatientMotherBirthName [PN] "1";
    0x00101080 MilitaryRank [LO] "1";
    0x00101081 BranchOfService [LO] "1";
    0x00101090 MedicalRecordLocator [LO] "1";
    0x00102000 MedicalAlerts [LO] "1-n";
    0x00102110 Allergies [LO] "1-n";
    0x00102150 CountryOfResidence [LO] "1";
    0x00102152 RegionOfResidence [LO] "1";
    0x00102154 PatientTelephoneNumbers [SH] "1-n";
    0x00102155 PatientTelecomInformation [LT] "1";
    0x00102160 EthnicGroup [SH] "1";
    0x00102180 Occupation [SH] "1";
    0x001021A0 SmokingStatus [CS] "1";
    0x001021B0 AdditionalPatientHistory [LT] "1";
    0x001021C0 PregnancyStatus [US] "1";
    0x001021D0 LastMenstrualDate [DA] "1";
    0x001021F0 PatientReligiousPreference [LO] "1";
    0x00102203 PatientSexNeutered [CS] "1";
    0x00102297 ResponsiblePerson [PN] "1";
    0x00102299 ResponsibleOrganization [LO] "1";
    0x00104000 PatientComments [LT] "1";
    0x00120010 ClinicalTrialSponsorName [LO] "1";
    0x00120020 ClinicalTrialProtocolID [LO] "1";
    0x00120021 ClinicalTrialProtocolName [LO] "1";
    0x00120030 ClinicalTrialSiteID [LO] "1";
    0x00120031 ClinicalTrialSiteName [LO] "1";
    0x00120040 ClinicalTrialSubjectID [LO] "1";
    0x00120042 ClinicalTrialSubjectReadingID [LO] "1";
    0x00120050 ClinicalTrialTimePointID [LO] "1";
    0x00120051 ClinicalTrialTimePointDescription [ST] "1";
    0x00120060 ClinicalTrialCoordinatingCenterName [LO] "1";
    0x00120062 PatientIdentityRemoved [CS] "1";
    0x00120063 DeidentificationMethod [LO] "1-n";
    0x00120064 DeidentificationMethodCodeSequence [SQ] "1";
    0x00120071 ClinicalTrialSeriesID [LO] "1";
    0x00120081 ClinicalTrialProtocolEthicsCommitteeName [LO] "1";
    0x00120082 ClinicalTrialProtocolEthicsCommitteeApprovalNumber [LO] "1";
    0x00180010 ContrastBolusAgent [LO] "1";
    0x00180015 BodyPartExamined [CS] "1";
    0x00180050 SliceThickness [DS] "1";
    0x00180080 RepetitionTime [DS] "1";
    0x00180081 EchoTime [DS] "1";
    0x00181000 DeviceSerialNumber [LO] "1";
    0x00181002 DeviceUID [UI] "1";
    0x00181004 PlateID [LO] "1";
    0x00181005 GeneratorID [LO] "1";
    0x00181007 CassetteID [LO] "1";
    0x00181008 GantryID [LO] "1";
    0x0018100B ManufacturerDeviceClassUID [UI] "1-n";
    0x00181012 DateOfSecondaryCapture [DA] "1";
    0x00181014 TimeOfSecondaryCapture [TM] "1";
    0x00181016 SecondaryCaptureDeviceManufacturer [LO] "1";
    0x00181018 SecondaryCaptureDeviceManufacturerModelName [LO] "1";
    0x00181019 SecondaryCaptureDeviceSoftwareVersions [LO] "1-n";
    0x00181020 SoftwareVersions [LO] "1-n";
    0x00181030 ProtocolName [LO] "1";
    0x00181078 RadiopharmaceuticalStartDateTime [DT] "1";
    0x00181079 RadiopharmaceuticalStopDateTime [DT] "1";
    0x00181200 DateOfLastCalibration [DA] "1-n";
    0x00181201 TimeOfLastCalibration [TM] "1-n";
    0x00181400 AcquisitionDeviceProcessingDescription [LO] "1";
    0x00184000 AcquisitionComments [LT] "1";
    0x0018700A DetectorID [SH] "1";
    0x00189074 FrameAcquisitionDateTime [DT] "1";
    0x00189151 FrameReferenceDateTime [DT] "1";
    0x00189424 AcquisitionProtocolDescription [LT] "1";
    0x00189516 StartAcquisitionDateTime [DT] "1";
    0x00189517 EndAcquisitionDateTime [DT] "1";
    0x0018A002 ContributionDateTime [DT] "1";
    0x0018A003 ContributionDescription [ST] "1";
    0x0020000D StudyInstanceUID [UI] "1";
    0x0020000E SeriesInstanceUID [UI] "1";
    0x00200010 StudyID [SH] "1";
    0x00200011 SeriesNumber [IS] "1";
    0x00200012 AcquisitionNumber [IS] "1";
    0x00200013 InstanceNumber [IS] "1";
    0x00200032 ImagePositionPatient [DS] "3";
    0x00200037 ImageOrientationPatient [DS] "6";
    0x00200052 FrameOfReferenceUID [UI] "1";
    0x00200200 SynchronizationFrameOfReferenceUID [UI] "1";
    0x00203401 ModifyingDeviceID [CS] "1";
    0x00203404 ModifyingDeviceManufacturer [LO] "1";
    0x00203406 ModifiedImageDescription [LO] "1";
    0x00204000 ImageComments [LT] "1";
    0x00209158 FrameComments [LT] "1";
    0x00209161 ConcatenationUID [UI] "1";
    0x00209164 DimensionOrganizationUID [UI] "1";
    0x00280002 SamplesPerPixel [US] "1";
    0x00280004 PhotometricInterpretation [CS] "1";
    0x00280006 PlanarConfiguration [US] "1";
    0x00280008 NumberOfFrames [IS] "1";
    0x00280010 Rows [US] "1";
    0x00280011 Columns [US] "1";
    0x00280030 PixelSpacing [DS] "2";
    0x00280100 BitsAllocated [US] "1";
    0x00280101 BitsStored [US] "1";
    0x00280102 HighBit [US] "1";
    0x00280103 PixelRepresentation [US] "1";
    0x00280106 SmallestImagePixelValue [US | SS] "1";
    0x00280107 LargestImagePixelValue [US | SS] "1";
    0x00280303 LongitudinalTemporalInformationModified [CS] "1";
    0x00281050 WindowCenter [DS] "1-n";
    0x00281051 WindowWidth [DS] "1-n";
    0x00281052 RescaleIntercept [DS] "1";
    0x00281053 RescaleSlope [DS] "1";
    0x00281199 PaletteColorLookupTableUID [UI] "1";
    0x00281214 LargePaletteColorLookupTableUID [UI] "1";
    0x00284000 ImagePresentationComments [LT] "1";
    0x00320012 StudyIDIssuer [LO] "1";
    0x00321000 ScheduledStudyStartDate [DA] "1";
    0x00321001 ScheduledStudyStartTime [TM] "1";
    0x00321020 ScheduledStudyLocation [LO] "1";
    0x00321021 ScheduledStudyLocationAETitle [AE] "1-n";
    0x00321030 ReasonForStudy [LO] "1";
    0x00321032 RequestingPhysician [PN] "1";
    0x00321033 RequestingService [LO] "1";
    0x00321060 RequestedProcedureDescription [LO] "1";
    0x00321070 RequestedContrastAgent [LO] "1";
    0x00324000 StudyComments [LT] "1";
    0x00380010 AdmissionID [LO] "1";
    0x00380011 IssuerOfAdmissionID [LO] "1";
    0x00380020 AdmittingDate [DA] "1";
    0x00380021 AdmittingTime [TM] "1";
    0x00380060 ServiceEpisodeID [LO] "1";
    0x00380062 ServiceEpisodeDescription [LO] "1";
    0x00380300 CurrentPatientLocation [LO] "1";
    0x00380400 PatientInstitutionResidence [LO] "1";
    0x00380500 PatientState [LO] "1";
    0x00384000 VisitComments [LT] "1";
    0x00400001 ScheduledStationAETitle [AE] "1-n";
    0x00400002 ScheduledProcedureStepStartDate [DA] "1";
    0x00400003 ScheduledProcedureStepStartTime [TM] "1";
    0x00400004 ScheduledProcedureStepEndDate [DA] "1";
    0x00400005 ScheduledProcedureStepEndTime [TM] "1";
    0x00400006 ScheduledPerformingPhysicianName [PN] "1";
    0x00400007 ScheduledProcedureStepDescription [LO] "1";
    0x00400009 ScheduledProcedureStepID [SH] "1";
    0x00400010 ScheduledStationName [SH] "1-n";
    0x00400011 ScheduledProcedureStepLocation [SH] "1";
    0x00400241 PerformedStationAETitle [AE] "1";
    0x00400242 PerformedStationName [SH] "1";
    0x00400243 PerformedLocation [SH] "1";
    0x00400244 PerformedProcedureStepStartDate [DA] "1";
    0x00400245 PerformedProcedureStepStartTime [TM] "1";
    0x00400250 PerformedProcedureStepEndDate [DA] "1";
    0x00400251 PerformedProcedureStepEndTime [TM] "1";
    0x00400253 PerformedProcedureStepID [SH] "1";
    0x00400254 PerformedProcedureStepDescription [LO] "1";
    0x00400275 RequestAttributesSequence [SQ] "1";
    0x00400280 CommentsOnThePerformedProcedureStep [ST] "1";
    0x00401001 RequestedProcedureID [SH] "1";
    0x00401002 ReasonForTheRequestedProcedure [LO] "1";
    0x00401004 PatientTransportArrangements [LO] "1";
    0x00401005 RequestedProcedureLocation [LO] "1";
    0x00401010 NamesOfIntendedRecipientsOfResults [PN] "1-n";
    0x00401101 PersonIdentificationCodeSequence [SQ] "1";
    0x00401102 PersonAddress [ST] "1";
    0x00401103 PersonTelephoneNumbers [LO] "1-n";
    0x00401400 RequestedProcedureComments [LT] "1";
    0x00402001 ReasonForTheImagingServiceRequest [LO] "1";
    0x00402016 PlacerOrderNumberImagingServiceRequest [LO] "1";
    0x00402017 FillerOrderNumberImagingServiceRequest [LO] "1";
    0x00402400 ImagingServiceRequestComments [LT] "1";
    0x00403001 ConfidentialityConstraintOnPatientDataDescription [LO] "1";
    0x0040A027 VerifyingOrganization [LO] "1";
    0x0040A030 VerificationDateTime [DT] "1";
    0x0040A040 ValueType [CS] "1";
    0x0040A043 ConceptNameCodeSequence [SQ] "1";
    0x0040A073 VerifyingObserverSequence [SQ] "1";
    0x0040A075 VerifyingObserverName [PN] "1";
    0x0040A078 AuthorObserverSequence [SQ] "1";
    0x0040A07A ParticipantSequence [SQ] "1";
    0x0040A07C CustodialOrganizationSequence [SQ] "1";
    0x0040A088 VerifyingObserverIdentificationCodeSequence [SQ] "1";
    0x0040A120 DateTime [DT] "1";
    0x0040A121 Date [DA] "1";
    0x0040A122 Time [TM] "1";
    0x0040A123 PersonName [PN] "1";
    0x0040A124 UID [UI] "1";
    0x0040A160 TextValue [UT] "1";
    0x0040A730 ContentSequence [SQ] "1";
    0x0040DB0C TemplateExtensionOrganizationUID [UI] "1";
    0x0040DB0D TemplateExtensionCreatorUID [UI] "1";
    0x00500020 DeviceDescription [LO] "1";
    0x00620002 SegmentSequence [SQ] "1";
    0x00620004 SegmentNumber [US] "1";
    0x00620005 SegmentLabel [LO] "1";
    0x00620006 SegmentDescription [ST] "1";
    0x00700001 GraphicAnnotationSequence [SQ] "1";
    0x00700084 ContentCreatorName [PN] "1";
    0x00700086 ContentCreatorIdentificationCodeSequence [SQ] "1";
    0x00880140 StorageMediaFileSetUID [UI] "1";
    0x04000100 DigitalSignatureUID [UI] "1";
    0x04000402 ReferencedDigitalSignatureSequence [SQ] "1";
    0x04000403 ReferencedSOPInstanceMACSequence [SQ] "1";
    0x04000404 MAC [OB] "1";
    0x04000550 ModifiedAttributesSequence [SQ] "1";
    0x04000561 OriginalAttributesSequence [SQ] "1";
    0x30060002 StructureSetLabel [SH] "1";
    0x30060004 StructureSetName [LO] "1";
    0x30060006 StructureSetDescription [ST] "1";
    0x30060008 StructureSetDate [DA] "1";
    0x30060009 StructureSetTime [TM] "1";
    0x30060010 ReferencedFrameOfReferenceSequence [SQ] "1";
    0x30060012 RTReferencedStudySequence [SQ] "1";
    0x30060014 RTReferencedSeriesSequence [SQ] "1";
    0x30060016 ContourImageSequence [SQ] "1";
    0x30060020 StructureSetROISequence [SQ] "1";
    0x30060022 ROINumber [IS] "1";
    0x30060024 ReferencedFrameOfReferenceUID [UI] "1";
    0x30060026 ROIName [LO] "1";
    0x30060028 ROIDescription [ST] "1";
    0x30060039 ROIContourSequence [SQ] "1";
    0x30060040 ContourSequence [SQ] "1";
    0x30060085 ROIObservationLabel [SH] "1";
    0x30060088 ROIObservationDescription [ST] "1";
    0x300600C2 RelatedFrameOfReferenceUID [UI] "1";
    0x300A0002 RTPlanLabel [SH] "1";
    0x300A0003 RTPlanName [LO] "1";
    0x300A0004 RTPlanDescription [ST] "1";
    0x300A0006 RTPlanDate [DA] "1";
    0x300A0007 RTPlanTime [TM] "1";
    0x300E0008 ReviewerName [PN] "1";
    0x40000010 Arbitrary [LT] "1";
    0x40004000 TextComments [LT] "1";
    0x52009229 SharedFunctionalGroupsSequence [SQ] "1";
    0x52009230 PerFrameFunctionalGroupsSequence [SQ] "1";
    0x7FE00010 PixelData [OW | OB] "1";
    0xFFFAFFFA DigitalSignaturesSequence [SQ] "1";
    0xFFFCFFFC DataSetTrailingPadding [OB] "1";
};

/// Repeating-group entries as `(pattern, keyword, vrs, vm)`.
pub(crate) static PATTERNS: &[(&str, &str, &[VR], &str)] = &[
    ("50xx,0005", "CurveDimensions", &[US], "1"),
    ("50xx,0010", "NumberOfPoints", &[US], "1"),
    ("50xx,0020", "TypeOfData", &[CS], "1"),
    ("50xx,0022", "CurveDescription", &[LO], "1"),
    ("50xx,3000", "CurveData", &[OW, OB], "1"),
    ("60xx,0010", "OverlayRows", &[US], "1"),
    ("60xx,0011", "OverlayColumns", &[US], "1"),
    ("60xx,0022", "OverlayDescription", &[LO], "1"),
    ("60xx,0040", "OverlayType", &[CS], "1"),
    ("60xx,0050", "OverlayOrigin", &[SS], "2"),
    ("60xx,0100", "OverlayBitsAllocated", &[US], "1"),
    ("60xx,0102", "OverlayBitPosition", &[US], "1"),
    ("60xx,1500", "OverlayLabel", &[LO], "1"),
    ("60xx,3000", "OverlayData", &[OW, OB], "1"),
    ("60xx,4000", "OverlayComments", &[LT], "1"),
];
